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

#include "casbi/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

PenaltySpec PenaltySpec::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("constant penalty requires a positive finite value");
  }
  PenaltySpec p;
  p.kind_ = Kind::constant;
  p.value_ = value;
  return p;
}

PenaltySpec PenaltySpec::power(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw DomainError("power penalty requires k >= 0");
  }
  PenaltySpec p;
  p.kind_ = Kind::power;
  p.k_ = k;
  return p;
}

PenaltySpec PenaltySpec::clamp_below(PenaltySpec inner) {
  PenaltySpec p;
  p.kind_ = Kind::clamp_below;
  p.inner_ = std::make_shared<const PenaltySpec>(std::move(inner));
  return p;
}

PenaltySpec PenaltySpec::clamp_above(PenaltySpec inner, double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    throw DomainError("clamp_above penalty requires a positive finite cap");
  }
  PenaltySpec p;
  p.kind_ = Kind::clamp_above;
  p.cap_ = cap;
  p.inner_ = std::make_shared<const PenaltySpec>(std::move(inner));
  return p;
}

double PenaltySpec::operator()(double z) const {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("penalty evaluated at non-positive or non-finite cost");
  }
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::power:
      return k_ == 0.0 ? 1.0 : std::pow(z, k_);
    case Kind::clamp_below:
      return std::max(1.0, (*inner_)(z));
    case Kind::clamp_above:
      return std::min(cap_, (*inner_)(z));
  }
  return value_;
}

bool PenaltySpec::is_constant() const {
  switch (kind_) {
    case Kind::constant:
      return true;
    case Kind::power:
      return k_ == 0.0;
    case Kind::clamp_below:
    case Kind::clamp_above:
      return inner_->is_constant();
  }
  return false;
}

std::string PenaltySpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::constant:
      out << "constant(" << value_ << ")";
      break;
    case Kind::power:
      out << "z^" << k_;
      break;
    case Kind::clamp_below:
      out << "max(1, " << inner_->describe() << ")";
      break;
    case Kind::clamp_above:
      out << "min(" << inner_->describe() << ", " << cap_ << ")";
      break;
  }
  return out.str();
}

namespace {

struct CostExtrema {
  double min_cost;
  double max_cost;
};

// Scans a dense grid, tracks both raw and clamped extrema, then polishes the
// clamped extrema with derivative-free local refinement.
CostExtrema grid_extrema(const CostModel& cost, const Box& support, int grid_size,
                         double* raw_min_out) {
  const std::size_t p = support.dim();
  const int per_axis = grid_size > 0 ? grid_size : (p == 1 ? 1024 : 64);
  std::vector<double> theta(p);
  std::vector<int> idx(p, 0);
  double min_cost = std::numeric_limits<double>::infinity();
  double max_cost = -std::numeric_limits<double>::infinity();
  double raw_min = std::numeric_limits<double>::infinity();
  std::vector<double> argmin(p), argmax(p);
  for (;;) {
    for (std::size_t d = 0; d < p; ++d) {
      theta[d] = support.low[d] +
                 (support.high[d] - support.low[d]) * idx[d] / static_cast<double>(per_axis - 1);
    }
    raw_min = std::min(raw_min, cost.eval_raw(theta));
    const double c = cost.eval(theta);
    if (c < min_cost) {
      min_cost = c;
      argmin = theta;
    }
    if (c > max_cost) {
      max_cost = c;
      argmax = theta;
    }
    std::size_t d = 0;
    while (d < p && ++idx[d] == per_axis) {
      idx[d] = 0;
      ++d;
    }
    if (d == p) break;
  }
  if (raw_min_out != nullptr) *raw_min_out = raw_min;

  const auto refine = [&](std::vector<double> start, bool maximise) {
    const double sign = maximise ? -1.0 : 1.0;
    if (p == 1) {
      const double step = (support.high[0] - support.low[0]) / (per_axis - 1);
      const double a = std::max(support.low[0], start[0] - step);
      const double b = std::min(support.high[0], start[0] + step);
      const double x = golden_section_min([&](double t) { return sign * cost.eval1(t); }, a, b);
      return sign * cost.eval1(x);
    }
    // Coordinate-descent polish around the grid optimum.
    std::vector<double> x = start;
    for (int sweep = 0; sweep < 4; ++sweep) {
      for (std::size_t d = 0; d < p; ++d) {
        const double step = (support.high[d] - support.low[d]) / (per_axis - 1);
        const double a = std::max(support.low[d], x[d] - step);
        const double b = std::min(support.high[d], x[d] + step);
        x[d] = golden_section_min(
            [&](double t) {
              std::vector<double> y = x;
              y[d] = t;
              return sign * cost.eval(y);
            },
            a, b, 1e-10, 60);
      }
    }
    return sign * cost.eval(x);
  };

  min_cost = std::min(min_cost, refine(argmin, false));
  max_cost = std::max(max_cost, refine(argmax, true));
  return {min_cost, max_cost};
}

CostExtrema corner_extrema(const CostModel& cost, const Box& support) {
  const std::size_t p = support.dim();
  double min_cost = std::numeric_limits<double>::infinity();
  double max_cost = -std::numeric_limits<double>::infinity();
  std::vector<double> theta(p);
  for (std::size_t mask = 0; mask < (std::size_t{1} << p); ++mask) {
    for (std::size_t d = 0; d < p; ++d) {
      theta[d] = (mask >> d) & 1 ? support.high[d] : support.low[d];
    }
    const double raw = cost.eval_raw(theta);
    if (raw <= 0.0 && !cost.is_fitted()) {
      throw InvalidCostError("analytic cost model is non-positive at a support corner");
    }
    const double c = cost.eval(theta);
    min_cost = std::min(min_cost, c);
    max_cost = std::max(max_cost, c);
  }
  return {min_cost, max_cost};
}

}  // namespace

PenaltyBounds penalty_bounds(const PenaltySpec& penalty, const CostModel& cost, const Box& support,
                             int grid_size, double safety_factor) {
  if (support.dim() == 0 || support.dim() != support.high.size()) {
    throw DomainError("penalty_bounds requires a non-empty box support");
  }
  for (std::size_t d = 0; d < support.dim(); ++d) {
    if (!(support.low[d] < support.high[d]) || !std::isfinite(support.low[d]) ||
        !std::isfinite(support.high[d])) {
      throw DomainError("penalty_bounds requires a bounded support with low < high");
    }
  }
  if (!(safety_factor > 0.0 && safety_factor <= 1.0)) {
    throw DomainError("safety_factor must lie in (0, 1]");
  }

  PenaltyBounds bounds;
  bounds.safety_factor = safety_factor;
  CostExtrema extrema{};
  if (cost.monotone_per_coordinate(support)) {
    extrema = corner_extrema(cost, support);
    bounds.method = PenaltyBounds::Method::analytic_endpoints;
  } else {
    double raw_min = 0.0;
    extrema = grid_extrema(cost, support, grid_size, &raw_min);
    if (raw_min <= 0.0 && !cost.is_fitted()) {
      throw InvalidCostError("analytic cost model evaluates non-positive on the support grid");
    }
    bounds.method = PenaltyBounds::Method::grid_refined;
  }

  // Every penalty variant is non-decreasing, so the extrema of g(c(theta))
  // are g at the cost extrema.
  bounds.g_min = penalty(extrema.min_cost) * safety_factor;
  bounds.g_max = penalty(extrema.max_cost);
  if (!(bounds.g_min > 0.0) || !std::isfinite(bounds.g_max) || bounds.g_min > bounds.g_max) {
    throw InvalidCostError("penalty bounds are degenerate: g_min=" + std::to_string(bounds.g_min) +
                           " g_max=" + std::to_string(bounds.g_max));
  }
  return bounds;
}

}  // namespace casbi
