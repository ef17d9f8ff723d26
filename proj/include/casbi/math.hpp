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

#ifndef CASBI_MATH_HPP
#define CASBI_MATH_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace casbi {

/// Pairwise (binary-tree) summation. The reduction tree depends only on the
/// length, so results are identical for any worker count and numerically
/// stable for long accumulations.
double pairwise_sum(std::span<const double> values);

/// Applies fn(i) for i in [0, n) on up to `workers` threads. Work is split in
/// contiguous chunks; fn must only write to per-index slots so the result is
/// scheduling-independent.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Golden-section minimisation of a unimodal 1-D function on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_iter = 200);

/// Adaptive Gauss-Kronrod (G7, K15) quadrature to an absolute tolerance.
/// Throws if the tolerance cannot be met within the subdivision budget.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, int max_depth = 48);

/// Iterated 1-D adaptive quadrature over a rectangle.
double adaptive_quad_2d(const std::function<double(double, double)>& f, double ax, double bx,
                        double ay, double by, double abs_tol = 1e-10);

/// Weighted quantile by left-continuous inversion of the weighted empirical
/// CDF: the smallest value whose cumulative weight reaches p. Weights must sum
/// to ~1.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double p);

/// Mean and (population) standard deviation in one pass, pairwise-summed.
struct MeanStd {
  double mean;
  double std;
};
MeanStd mean_std(std::span<const double> values);

/// One-sample Kolmogorov-Smirnov statistic against an analytic CDF.
double ks_statistic_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic by sorted merge.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace casbi

#endif
