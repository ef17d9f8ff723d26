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

#ifndef CASBI_PENALTY_HPP
#define CASBI_PENALTY_HPP

#include <memory>
#include <string>

#include "casbi/box.hpp"
#include "casbi/cost_model.hpp"

namespace casbi {

/// Non-decreasing, strictly positive penalty applied to simulation cost.
///
/// Variants: Constant{v}, Power{k} (z^k, with k=0 aliasing Constant{1}),
/// ClampBelow{inner} = max(1, inner(z)) and ClampAbove{inner, cap} =
/// min(inner(z), cap). Every variant preserves monotonicity, so the extrema
/// of the composed surface penalty(cost(theta)) are the penalty applied to
/// the extrema of the cost.
class PenaltySpec {
 public:
  enum class Kind { constant, power, clamp_below, clamp_above };

  static PenaltySpec constant(double value);
  static PenaltySpec power(double k);
  static PenaltySpec clamp_below(PenaltySpec inner);
  static PenaltySpec clamp_above(PenaltySpec inner, double cap);

  /// Evaluates the penalty at a positive cost. Throws DomainError otherwise.
  double operator()(double z) const;

  Kind kind() const { return kind_; }
  double power_exponent() const { return k_; }
  double constant_value() const { return value_; }
  double cap() const { return cap_; }
  const PenaltySpec* inner() const { return inner_.get(); }

  /// True when the penalty is flat (no tilt): Constant, or Power with k == 0.
  bool is_constant() const;

  std::string describe() const;

 private:
  PenaltySpec() = default;
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  double k_ = 0.0;
  double cap_ = 0.0;
  std::shared_ptr<const PenaltySpec> inner_;
};

/// Extrema of penalty(cost(theta)) over the prior support, with a safety
/// deflation of the minimum so downstream acceptance probabilities stay <= 1
/// under grid error.
struct PenaltyBounds {
  enum class Method { analytic_endpoints, grid_refined };
  double g_min = 1.0;
  double g_max = 1.0;
  Method method = Method::analytic_endpoints;
  double safety_factor = 1.0;
};

/// Computes PenaltyBounds for (penalty, cost) over a bounded support.
///
/// Cost models flagged monotone-per-coordinate are extremised at the box
/// corners; everything else is scanned on a dense grid (grid_size points per
/// axis; 0 selects 1024 for 1-D and 64 per axis otherwise) and polished with
/// golden-section (1-D) or coordinate descent. The returned g_min is
/// multiplied by safety_factor.
PenaltyBounds penalty_bounds(const PenaltySpec& penalty, const CostModel& cost, const Box& support,
                             int grid_size = 0, double safety_factor = 0.999);

}  // namespace casbi

#endif
