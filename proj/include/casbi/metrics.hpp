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

#ifndef CASBI_METRICS_HPP
#define CASBI_METRICS_HPP

#include <optional>
#include <vector>

namespace casbi {

/// Gaussian kernel exp(-||a-b||^2 / (2 l^2)); amplitude fixed to 1.
struct KernelConfig {
  double lengthscale = 1.0;
};

/// Median of pairwise Euclidean distances. Returns 1.0 (and sets the flag)
/// when all points coincide. Requires >= 2 points.
double median_heuristic(const std::vector<std::vector<double>>& points,
                        bool* degenerate = nullptr);

/// Squared maximum mean discrepancy between two (optionally weighted) point
/// sets. The default V-statistic estimate is never materially negative; the
/// unbiased U-statistic (uniform weights only) is available behind a flag.
double mmd2(const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
            const KernelConfig& kernel,
            const std::optional<std::vector<double>>& weights_x = std::nullopt,
            const std::optional<std::vector<double>>& weights_y = std::nullopt,
            bool unbiased = false, int workers = 1);

/// Per-dimension two-sample Kolmogorov-Smirnov statistics.
std::vector<double> ks_marginals(const std::vector<std::vector<double>>& x,
                                 const std::vector<std::vector<double>>& y);

}  // namespace casbi

#endif
