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

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "casbi/math.hpp"

using namespace casbi;

TEST_SUITE("math") {
  TEST_CASE("pairwise_sum matches exact sums") {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(pairwise_sum(v) == doctest::Approx(1000.0 * 1001.0 / 2.0).epsilon(1e-15));
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
  }

  TEST_CASE("parallel_for covers every index once for any worker count") {
    for (int workers : {1, 3, 16}) {
      std::vector<int> hits(1000, 0);
      parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
      for (int h : hits) CHECK(h == 1);
    }
  }

  TEST_CASE("adaptive quadrature on known integrals") {
    CHECK(adaptive_quad([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(adaptive_quad([](double x) { return 1.0 / x; }, 1.0, std::exp(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(adaptive_quad([](double x) { return std::sin(x); }, 0.0, 3.141592653589793) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(adaptive_quad_2d([](double x, double y) { return x * y; }, 0.0, 1.0, 0.0, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("golden section finds the minimum") {
    const double x = golden_section_min([](double t) { return (t - 1.3) * (t - 1.3); }, 0.0, 2.0);
    CHECK(x == doctest::Approx(1.3).epsilon(1e-8));
  }

  TEST_CASE("weighted quantile uses left-continuous inversion") {
    const std::vector<double> values = {0.0, 1.0};
    const std::vector<double> weights = {0.25, 0.75};
    CHECK(weighted_quantile(values, weights, 0.1) == 0.0);
    CHECK(weighted_quantile(values, weights, 0.25) == 0.0);
    CHECK(weighted_quantile(values, weights, 0.5) == 1.0);
    CHECK(weighted_quantile(values, weights, 1.0) == 1.0);
  }

  TEST_CASE("one-sample KS against the exact CDF of its own sample") {
    // For x_i = (i + 0.5)/n under U(0,1), the KS statistic is 0.5/n.
    const int n = 100;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = (i + 0.5) / n;
    const double d = ks_statistic_one_sample(samples, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.5 / n).epsilon(1e-12));
  }

  TEST_CASE("two-sample KS on disjoint and identical samples") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {10.0, 11.0};
    CHECK(ks_statistic_two_sample(a, b) == doctest::Approx(1.0));
    CHECK(ks_statistic_two_sample(a, a) == doctest::Approx(0.0));
  }
}
