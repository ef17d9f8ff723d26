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

#include "casbi/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

void check_points(const std::vector<std::vector<double>>& x,
                  const std::vector<std::vector<double>>& y) {
  if (x.empty() || y.empty()) throw DomainError("mmd2 requires non-empty point sets");
  if (x[0].size() != y[0].size()) throw DomainError("mmd2 dimension mismatch between point sets");
}

// Weighted kernel double sum: sum_ij wa_i wb_j k(a_i, b_j), accumulated per
// row then pairwise-reduced so the result is worker-count independent.
double kernel_cross_sum(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b, const std::vector<double>& wa,
                        const std::vector<double>& wb, double inv_two_l2, int workers,
                        bool skip_diagonal = false) {
  std::vector<double> row_sums(a.size());
  parallel_for(a.size(), workers, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (skip_diagonal && i == j) continue;
      s += wb[j] * std::exp(-squared_distance(a[i], b[j]) * inv_two_l2);
    }
    row_sums[i] = wa[i] * s;
  });
  return pairwise_sum(row_sums);
}

std::vector<double> normalised_weights(const std::optional<std::vector<double>>& w, std::size_t n,
                                       const char* label) {
  if (!w.has_value()) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  if (w->size() != n) throw DomainError(std::string("mmd2 ") + label + " weight length mismatch");
  const double total = pairwise_sum(*w);
  if (!(total > 0.0)) throw DomainError(std::string("mmd2 ") + label + " weights must sum > 0");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (*w)[i] / total;
  return out;
}

}  // namespace

double median_heuristic(const std::vector<std::vector<double>>& points, bool* degenerate) {
  if (points.size() < 2) throw DomainError("median_heuristic requires at least 2 points");
  std::vector<double> dists;
  dists.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      dists.push_back(std::sqrt(squared_distance(points[i], points[j])));
    }
  }
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  double median = dists[dists.size() / 2];
  if (dists.size() % 2 == 0) {
    auto lower = std::max_element(dists.begin(), dists.begin() + dists.size() / 2);
    median = 0.5 * (median + *lower);
  }
  if (degenerate != nullptr) *degenerate = false;
  if (median == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return 1.0;
  }
  return median;
}

double mmd2(const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
            const KernelConfig& kernel, const std::optional<std::vector<double>>& weights_x,
            const std::optional<std::vector<double>>& weights_y, bool unbiased, int workers) {
  check_points(x, y);
  if (!(kernel.lengthscale > 0.0)) throw DomainError("mmd2 requires a positive lengthscale");
  const double inv_two_l2 = 1.0 / (2.0 * kernel.lengthscale * kernel.lengthscale);
  const std::vector<double> wx = normalised_weights(weights_x, x.size(), "X");
  const std::vector<double> wy = normalised_weights(weights_y, y.size(), "Y");

  if (unbiased) {
    if (weights_x.has_value() || weights_y.has_value()) {
      throw DomainError("unbiased mmd2 supports uniform weights only");
    }
    if (x.size() < 2 || y.size() < 2) throw DomainError("unbiased mmd2 requires >= 2 points");
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    const std::vector<double> ones_x(x.size(), 1.0);
    const std::vector<double> ones_y(y.size(), 1.0);
    const double xx = kernel_cross_sum(x, x, ones_x, ones_x, inv_two_l2, workers, true);
    const double yy = kernel_cross_sum(y, y, ones_y, ones_y, inv_two_l2, workers, true);
    const double xy = kernel_cross_sum(x, y, ones_x, ones_y, inv_two_l2, workers);
    return xx / (nx * (nx - 1.0)) + yy / (ny * (ny - 1.0)) - 2.0 * xy / (nx * ny);
  }

  const double xx = kernel_cross_sum(x, x, wx, wx, inv_two_l2, workers);
  const double yy = kernel_cross_sum(y, y, wy, wy, inv_two_l2, workers);
  const double xy = kernel_cross_sum(x, y, wx, wy, inv_two_l2, workers);
  return xx + yy - 2.0 * xy;
}

std::vector<double> ks_marginals(const std::vector<std::vector<double>>& x,
                                 const std::vector<std::vector<double>>& y) {
  check_points(x, y);
  const std::size_t dim = x[0].size();
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<double> a(x.size()), b(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i][d];
    for (std::size_t i = 0; i < y.size(); ++i) b[i] = y[i][d];
    out[d] = ks_statistic_two_sample(std::move(a), std::move(b));
  }
  return out;
}

}  // namespace casbi
