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

#ifndef CASBI_PRIOR_HPP
#define CASBI_PRIOR_HPP

#include <span>
#include <vector>

#include "casbi/box.hpp"
#include "casbi/rng.hpp"

namespace casbi {

/// Sampling distribution over parameters: independent box-uniform or
/// independent Gaussian per dimension.
class PriorSpec {
 public:
  enum class Kind { box_uniform, gaussian };

  static PriorSpec box_uniform(std::vector<double> low, std::vector<double> high);
  static PriorSpec box_uniform1(double low, double high) {
    return box_uniform({low}, {high});
  }
  static PriorSpec gaussian(std::vector<double> mean, std::vector<double> stddev);

  double density(std::span<const double> theta) const;
  std::vector<double> sample(RngStream& rng) const;

  std::size_t dim() const { return a_.size(); }
  Kind kind() const { return kind_; }

  /// Bounded box covering the support. Exact for box-uniform; mean +- 10
  /// stddev for Gaussians (used for penalty-bound grids).
  Box support_box() const;

  const std::vector<double>& low_or_mean() const { return a_; }
  const std::vector<double>& high_or_stddev() const { return b_; }

 private:
  PriorSpec() = default;
  Kind kind_ = Kind::box_uniform;
  std::vector<double> a_;  // low (box) or mean (gaussian)
  std::vector<double> b_;  // high (box) or stddev (gaussian)
};

}  // namespace casbi

#endif
