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

#include <cmath>

#include "casbi/errors.hpp"
#include "casbi/metrics.hpp"
#include "casbi/rng.hpp"

using namespace casbi;

namespace {

std::vector<std::vector<double>> normal_cloud(double mean, double stddev, int n,
                                              std::uint64_t seed) {
  RngStream rng(derive_key(seed, 0));
  std::vector<std::vector<double>> out(n);
  for (auto& p : out) p = {mean + stddev * rng.normal()};
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("median heuristic of two points is their distance") {
    CHECK(median_heuristic({{0.0, 0.0}, {3.0, 4.0}}) == doctest::Approx(5.0));
  }

  TEST_CASE("median heuristic degenerates to one on coincident points") {
    bool degenerate = false;
    CHECK(median_heuristic({{1.0}, {1.0}, {1.0}}, &degenerate) == 1.0);
    CHECK(degenerate);
    CHECK_THROWS_AS(median_heuristic({{1.0}}), DomainError);
  }

  TEST_CASE("identical weighted sets give zero mmd2") {
    const auto x = normal_cloud(0.0, 1.0, 500, 1);
    std::vector<double> w(x.size());
    RngStream rng(derive_key(2, 0));
    for (auto& v : w) v = rng.uniform01();
    CHECK(std::abs(mmd2(x, x, KernelConfig{1.0}, w, w)) < 1e-12);
  }

  TEST_CASE("same-distribution samples give a small mmd2") {
    const auto x = normal_cloud(0.0, 1.0, 5000, 3);
    const auto y = normal_cloud(0.0, 1.0, 5000, 4);
    CHECK(mmd2(x, y, KernelConfig{1.0}) <= 0.01);
  }

  TEST_CASE("shifted normals match the closed-form population mmd2") {
    // For unit-lengthscale Gaussian kernel and unit normals one apart:
    // 2/sqrt(3) (1 - exp(-1/6)) = 0.177268.
    const double population = 2.0 / std::sqrt(3.0) * (1.0 - std::exp(-1.0 / 6.0));
    const auto x = normal_cloud(0.0, 1.0, 5000, 5);
    const auto y = normal_cloud(1.0, 1.0, 5000, 6);
    CHECK(mmd2(x, y, KernelConfig{1.0}, std::nullopt, std::nullopt, false, 2) ==
          doctest::Approx(population).epsilon(0.10));
  }

  TEST_CASE("mmd2 is exactly symmetric") {
    const auto x = normal_cloud(0.0, 1.0, 300, 7);
    const auto y = normal_cloud(0.5, 2.0, 400, 8);
    CHECK(mmd2(x, y, KernelConfig{0.7}) == mmd2(y, x, KernelConfig{0.7}));
  }

  TEST_CASE("unbiased estimator is close to the biased one at scale") {
    const auto x = normal_cloud(0.0, 1.0, 2000, 9);
    const auto y = normal_cloud(1.0, 1.0, 2000, 10);
    const double v = mmd2(x, y, KernelConfig{1.0});
    const double u = mmd2(x, y, KernelConfig{1.0}, std::nullopt, std::nullopt, true);
    CHECK(u == doctest::Approx(v).epsilon(0.02));
  }

  TEST_CASE("lengthscale limits drive mmd2 towards its extremes") {
    const auto x = normal_cloud(0.0, 1.0, 400, 11);
    const auto y = normal_cloud(3.0, 1.0, 400, 12);
    const double base = mmd2(x, y, KernelConfig{1.0});
    const double huge = mmd2(x, y, KernelConfig{1e6});
    const double tiny = mmd2(x, y, KernelConfig{1e-6});
    CHECK(huge < 1e-6);
    CHECK(huge < base);
    CHECK(tiny > base);  // approaches the sum of squared weight norms
  }

  TEST_CASE("weighted mmd2 agrees with explicit resampling weights") {
    // Duplicating a point is the same as doubling its weight.
    const std::vector<std::vector<double>> duplicated = {{0.0}, {0.0}, {1.0}};
    const std::vector<std::vector<double>> weighted = {{0.0}, {1.0}};
    const std::vector<double> w = {2.0 / 3.0, 1.0 / 3.0};
    const auto y = normal_cloud(0.5, 1.0, 50, 13);
    const double a = mmd2(duplicated, y, KernelConfig{1.0});
    const double b = mmd2(weighted, y, KernelConfig{1.0}, w, std::nullopt);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  TEST_CASE("ks marginals on identical and disjoint samples") {
    const auto x = normal_cloud(0.0, 1.0, 200, 14);
    const auto ks_same = ks_marginals(x, x);
    CHECK(ks_same[0] == 0.0);
    const std::vector<std::vector<double>> lo = {{0.0}, {0.5}, {1.0}};
    const std::vector<std::vector<double>> hi = {{10.0}, {11.0}};
    CHECK(ks_marginals(lo, hi)[0] == 1.0);
  }

  TEST_CASE("ks statistic matches the population gap for shifted uniforms") {
    RngStream rng(derive_key(15, 0));
    const int n = 100000;
    std::vector<std::vector<double>> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = {rng.uniform01()};
      y[i] = {0.5 + rng.uniform01()};
    }
    CHECK(ks_marginals(x, y)[0] == doctest::Approx(0.5).epsilon(0.02));
  }

  TEST_CASE("ks is invariant under increasing marginal transformations") {
    RngStream rng(derive_key(16, 0));
    std::vector<std::vector<double>> x(500), y(500), tx(500), ty(500);
    for (int i = 0; i < 500; ++i) {
      x[i] = {rng.normal()};
      y[i] = {0.3 + 0.8 * rng.normal()};
      tx[i] = {std::exp(x[i][0])};
      ty[i] = {std::exp(y[i][0])};
    }
    CHECK(ks_marginals(x, y)[0] == doctest::Approx(ks_marginals(tx, ty)[0]).epsilon(1e-12));
  }

  TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(
        static_cast<void>(mmd2({{1.0, 2.0}}, {{1.0}}, KernelConfig{1.0})), DomainError);
  }
}
