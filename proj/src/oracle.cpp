// Copyright 2026 The casbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casbi/oracle.hpp"

#include <cmath>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

double ClosedFormCase::cost_at(double theta) const {
  return cost_kind == CostKind::linear ? alpha * theta + beta : alpha * theta * theta;
}

CostModel ClosedFormCase::cost_model() const {
  return cost_kind == CostKind::linear ? CostModel::analytic_linear({alpha}, beta)
                                       : CostModel::analytic_quadratic({alpha});
}

namespace {

void validate_case(const ClosedFormCase& c) {
  if (!(c.theta_min > 0.0) || !(c.theta_min < c.theta_max) || !std::isfinite(c.theta_max)) {
    throw DomainError("closed-form case requires 0 < theta_min < theta_max < inf");
  }
  if (!(c.alpha > 0.0) || !(c.k >= 0.0)) {
    throw DomainError("closed-form case requires alpha > 0 and k >= 0");
  }
  if (c.cost_kind == ClosedFormCase::CostKind::linear && c.beta < 0.0 &&
      c.cost_at(c.theta_min) <= 0.0) {
    throw DomainError("closed-form case cost must stay positive on the support");
  }
}

}  // namespace

OracleValue closed_form_B(const ClosedFormCase& c) {
  validate_case(c);
  if (c.k == 0.0) {
    return {1.0, true};  // constant penalty leaves the prior untouched
  }
  if (c.cost_kind == ClosedFormCase::CostKind::linear) {
    const double width = c.theta_max - c.theta_min;
    const double c_lo = c.cost_at(c.theta_min);
    const double c_hi = c.cost_at(c.theta_max);
    if (c.k == 1.0) {
      return {(std::log(c_hi) - std::log(c_lo)) / (c.alpha * width), true};
    }
    if (c.k > 1.0) {
      const double one_minus_k = 1.0 - c.k;
      return {(std::pow(c_hi, one_minus_k) - std::pow(c_lo, one_minus_k)) /
                  (c.alpha * one_minus_k * width),
              true};
    }
  }
  return {quad_B(c.prior(), c.cost_model(), c.penalty()), false};
}

OracleValue closed_form_CG(const ClosedFormCase& c) {
  validate_case(c);
  const double lo = c.theta_min;
  const double hi = c.theta_max;
  if (c.k == 0.0) {
    return {1.0, true};
  }
  if (c.beta == 0.0 && c.cost_kind == ClosedFormCase::CostKind::linear && c.k == 1.0) {
    return {(hi + lo) * std::log(hi / lo) / (2.0 * (hi - lo)), true};
  }
  if (c.beta == 0.0 && c.cost_kind == ClosedFormCase::CostKind::quadratic && c.k == 1.0) {
    return {(hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo) * lo * hi), true};
  }
  if (c.beta == 0.0 && c.cost_kind == ClosedFormCase::CostKind::linear && c.k == 2.0) {
    return {(hi * hi - lo * lo) / (2.0 * hi * lo * std::log(hi / lo)), true};
  }
  if (c.beta == 0.0 && c.cost_kind == ClosedFormCase::CostKind::quadratic && c.k == 2.0) {
    const double cubes = hi * hi * hi - lo * lo * lo;
    return {cubes * cubes / (9.0 * (hi - lo) * (hi - lo) * hi * hi * lo * lo), true};
  }
  return {quad_CG(c.prior(), c.cost_model(), c.penalty()), false};
}

namespace {

void require_bounded(const PriorSpec& prior) {
  if (prior.kind() != PriorSpec::Kind::box_uniform) {
    throw DomainError("quadrature oracles require a bounded box-uniform prior");
  }
  if (prior.dim() > 2) {
    throw DomainError("quadrature oracles support 1-D or 2-D supports only");
  }
}

double integrate_over_prior(const PriorSpec& prior, const std::function<double(std::span<const double>)>& f,
                            double abs_tol) {
  const auto& lo = prior.low_or_mean();
  const auto& hi = prior.high_or_stddev();
  if (prior.dim() == 1) {
    const double width = hi[0] - lo[0];
    return adaptive_quad(
        [&](double x) {
          const double theta[1] = {x};
          return f(std::span<const double>(theta, 1)) / width;
        },
        lo[0], hi[0], abs_tol);
  }
  const double area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
  return adaptive_quad_2d(
      [&](double x, double y) {
        const double theta[2] = {x, y};
        return f(std::span<const double>(theta, 2)) / area;
      },
      lo[0], hi[0], lo[1], hi[1], abs_tol);
}

}  // namespace

double quad_B(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
              double abs_tol) {
  require_bounded(prior);
  return integrate_over_prior(
      prior, [&](std::span<const double> theta) { return 1.0 / penalty(cost.eval(theta)); },
      abs_tol);
}

double quad_CG(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
               double abs_tol) {
  require_bounded(prior);
  const double mean_cost_prior = integrate_over_prior(
      prior, [&](std::span<const double> theta) { return cost.eval(theta); }, abs_tol);
  const double b = quad_B(prior, cost, penalty, abs_tol);
  const double tilted_unnormalised = integrate_over_prior(
      prior,
      [&](std::span<const double> theta) {
        const double c = cost.eval(theta);
        return c / penalty(c);
      },
      abs_tol);
  return mean_cost_prior * b / tilted_unnormalised;
}

double tilted_cdf(const ClosedFormCase& c, double theta) {
  validate_case(c);
  if (theta <= c.theta_min) return 0.0;
  if (theta >= c.theta_max) return 1.0;
  if (c.k == 0.0) {
    return (theta - c.theta_min) / (c.theta_max - c.theta_min);
  }
  if (c.cost_kind == ClosedFormCase::CostKind::linear) {
    const double c_lo = c.cost_at(c.theta_min);
    const double c_hi = c.cost_at(c.theta_max);
    const double c_th = c.cost_at(theta);
    if (c.k == 1.0) {
      return std::log(c_th / c_lo) / std::log(c_hi / c_lo);
    }
    const double e = 1.0 - c.k;
    return (std::pow(c_th, e) - std::pow(c_lo, e)) / (std::pow(c_hi, e) - std::pow(c_lo, e));
  }
  // Quadratic cost: density proportional to theta^(-2k) on a positive support.
  const double e = 1.0 - 2.0 * c.k;
  if (e == 0.0) {
    return std::log(theta / c.theta_min) / std::log(c.theta_max / c.theta_min);
  }
  return (std::pow(theta, e) - std::pow(c.theta_min, e)) /
         (std::pow(c.theta_max, e) - std::pow(c.theta_min, e));
}

}  // namespace casbi
