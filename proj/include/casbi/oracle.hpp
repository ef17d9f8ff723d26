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

#ifndef CASBI_ORACLE_HPP
#define CASBI_ORACLE_HPP

#include "casbi/cost_model.hpp"
#include "casbi/penalty.hpp"
#include "casbi/prior.hpp"

namespace casbi {

/// A 1-D uniform-prior configuration with analytically tractable tilt:
/// linear cost alpha*theta + beta or quadratic cost alpha*theta^2, penalty
/// z^k.
struct ClosedFormCase {
  enum class CostKind { linear, quadratic };
  CostKind cost_kind = CostKind::linear;
  double alpha = 1.0;
  double beta = 0.0;  // linear cost only
  double k = 1.0;     // penalty exponent
  double theta_min = 1.0;
  double theta_max = 2.0;

  double cost_at(double theta) const;
  PriorSpec prior() const { return PriorSpec::box_uniform1(theta_min, theta_max); }
  CostModel cost_model() const;
  PenaltySpec penalty() const { return PenaltySpec::power(k); }
};

/// Value plus a flag telling whether the tabulated closed form was used or
/// the quadrature fallback kicked in.
struct OracleValue {
  double value = 0.0;
  bool closed_form = true;
};

/// Normalisation constant of the tilted density. Closed forms cover the
/// constant penalty and linear cost with k = 1 or k > 1; anything else falls
/// back to quadrature with the flag cleared.
OracleValue closed_form_B(const ClosedFormCase& c);

/// Computational gain. Closed forms cover the four tabulated rows
/// (linear/quadratic cost crossed with k = 1, 2, beta = 0) plus the constant
/// penalty; anything else falls back to quadrature with the flag cleared.
OracleValue closed_form_CG(const ClosedFormCase& c);

/// Adaptive-quadrature ground truth for B = integral of prior/penalty(cost)
/// over a bounded 1-D or 2-D support.
double quad_B(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
              double abs_tol = 1e-10);

/// Adaptive-quadrature ground truth for the computational gain.
double quad_CG(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
               double abs_tol = 1e-10);

/// CDF of the tilted density at theta; analytic for the supported cases.
double tilted_cdf(const ClosedFormCase& c, double theta);

}  // namespace casbi

#endif
