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
#include <cstdio>

#include "casbi/errors.hpp"
#include "casbi/inference.hpp"
#include "casbi/math.hpp"

using namespace casbi;

namespace {

WeightedPosterior toy_posterior(std::vector<std::vector<double>> thetas,
                                std::vector<double> weights) {
  WeightedPosterior post;
  post.thetas = std::move(thetas);
  post.weights = std::move(weights);
  return post;
}

struct GaussianToySetup {
  Simulator sim = make_simulator("gaussian_toy");
  PriorSpec prior = PriorSpec::box_uniform1(-5.0, 5.0);
  CostModel cost = CostModel::preset("gaussian-toy");
  ObservedData observed;

  explicit GaussianToySetup(std::uint64_t seed) {
    const double theta_true[1] = {2.0};
    observed = make_observed(sim, prior, theta_true, 100, 500, seed, 2);
  }
};

}  // namespace

TEST_SUITE("inference") {
  TEST_CASE("standardised distance uses the pilot scales") {
    ObservedData obs;
    obs.summary = {1.0, 10.0};
    obs.location = {0.0, 0.0};
    obs.scale = {1.0, 10.0};
    const std::vector<double> other = {2.0, 20.0};
    CHECK(obs.distance_to(other) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("gaussian toy posterior concentrates near the truth") {
    GaussianToySetup setup(100);
    const WeightedPosterior post =
        abc_rejection(setup.sim, PriorSampling{}, setup.prior, setup.cost, setup.observed, 0.05,
                      20000, 100, 100, 2);
    const PosteriorStats stats = posterior_stats(post);
    CHECK(std::abs(stats.mean[0] - setup.observed.summary[0]) < 0.1);
    CHECK(post.acceptance_rate > 0.0);
    CHECK(post.total_virtual_cost == doctest::Approx(20000.0 * 100.0));
  }

  TEST_CASE("cost-aware weights undo the sampling tilt") {
    GaussianToySetup setup(101);
    const CostAwareProposal proposal =
        CostAwareProposal::make(setup.prior, setup.cost, PenaltySpec::power(1.0));
    // Giant tolerance accepts everything, so the weighted mean must match the
    // prior mean rather than the tilted mean.
    const WeightedPosterior post =
        abc_rejection(setup.sim, proposal, setup.prior, setup.cost, setup.observed, 1e9, 20000,
                      100, 102, 2);
    CHECK(post.size() == 20000);
    const PosteriorStats stats = posterior_stats(post);
    std::vector<double> raw(post.size());
    for (std::size_t i = 0; i < post.size(); ++i) raw[i] = post.thetas[i][0];
    const double tilted_mean = pairwise_sum(raw) / static_cast<double>(post.size());
    CHECK(tilted_mean < -0.2);  // the tilt demonstrably moved the raw draws
    // Self-normalised-IS standard error is at most sqrt(gmax/gmin * var/n).
    const double se_bound =
        std::sqrt(11.0 * (100.0 / 12.0) / static_cast<double>(post.size()));
    CHECK(std::abs(stats.mean[0] - 0.0) < 4.0 * se_bound);
  }

  TEST_CASE("prior and cost-aware ABC agree on the gaussian toy") {
    GaussianToySetup setup(103);
    const WeightedPosterior prior_post =
        abc_rejection(setup.sim, PriorSampling{}, setup.prior, setup.cost, setup.observed, 0.05,
                      20000, 100, 104, 2);
    const CostAwareProposal proposal =
        CostAwareProposal::make(setup.prior, setup.cost, PenaltySpec::power(1.0));
    const WeightedPosterior ca_post =
        abc_rejection(setup.sim, proposal, setup.prior, setup.cost, setup.observed, 0.05, 20000,
                      100, 105, 2);
    const double mean_prior = posterior_stats(prior_post).mean[0];
    const double mean_ca = posterior_stats(ca_post).mean[0];
    CHECK(std::abs(mean_prior - mean_ca) < 0.1);
  }

  TEST_CASE("MIS strata are combined into weights that sum to one") {
    GaussianToySetup setup(106);
    const MISPlan plan = MISPlan::equal_powers({0.0, 1.0, 2.0}, 9000);
    const WeightedPosterior post =
        abc_rejection(setup.sim, plan, setup.prior, setup.cost, setup.observed, 0.3, 9000, 100,
                      107, 2);
    CHECK(std::abs(pairwise_sum(post.weights) - 1.0) < 1e-9);
    CHECK(post.n_proposed == 9000);
  }

  TEST_CASE("zero acceptances raise an empty-posterior error with quantiles") {
    GaussianToySetup setup(108);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(abc_rejection(setup.sim, PriorSampling{}, setup.prior, setup.cost,
                                        setup.observed, 1e-9, 500, 100, 109, 2)),
        doctest::Contains("quantiles"), EmptyPosteriorError);
  }

  TEST_CASE("posterior statistics on tiny hand-built posteriors") {
    SUBCASE("single particle") {
      const auto post = toy_posterior({{3.5}}, {1.0});
      const PosteriorStats stats = posterior_stats(post);
      CHECK(stats.mean[0] == 3.5);
      for (const auto& q : stats.quantiles[0]) CHECK(q == 3.5);
    }
    SUBCASE("two weighted particles") {
      const auto post = toy_posterior({{0.0}, {1.0}}, {0.25, 0.75});
      const PosteriorStats stats = posterior_stats(post);
      CHECK(stats.mean[0] == doctest::Approx(0.75));
      CHECK(stats.quantiles[0][2] == 1.0);  // median
      CHECK(stats.covariance[0] == doctest::Approx(0.25 * 0.75 * 0.75 + 0.75 * 0.25 * 0.25));
    }
  }

  TEST_CASE("systematic resampling preserves the weighted mean") {
    const auto post = toy_posterior({{0.0}, {1.0}, {2.0}}, {0.2, 0.5, 0.3});
    SUBCASE("degenerate single particle") {
      const auto once = toy_posterior({{7.0}}, {1.0});
      const auto draws = resample(once, 100, 1);
      for (const auto& d : draws) CHECK(d[0] == 7.0);
    }
    SUBCASE("large resample matches the weighted mean within sampling error") {
      const auto draws = resample(post, 100000, 2);
      std::vector<double> flat(draws.size());
      for (std::size_t i = 0; i < draws.size(); ++i) flat[i] = draws[i][0];
      const MeanStd ms = mean_std(flat);
      const double weighted_mean = 0.5 + 0.6;
      CHECK(std::abs(ms.mean - weighted_mean) <
            3.0 * ms.std / std::sqrt(static_cast<double>(draws.size())) + 1e-4);
    }
  }

  TEST_CASE("resampled statistics converge to the weighted statistics") {
    GaussianToySetup setup(110);
    const CostAwareProposal proposal =
        CostAwareProposal::make(setup.prior, setup.cost, PenaltySpec::power(2.0));
    const WeightedPosterior post =
        abc_rejection(setup.sim, proposal, setup.prior, setup.cost, setup.observed, 0.3, 5000,
                      100, 111, 2);
    const PosteriorStats stats = posterior_stats(post);
    const auto draws = resample(post, 1000000, 3);
    std::vector<double> flat(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) flat[i] = draws[i][0];
    const MeanStd ms = mean_std(flat);
    CHECK(ms.mean == doctest::Approx(stats.mean[0]).epsilon(0.01));
    const double weighted_std = std::sqrt(stats.covariance[0]);
    CHECK(ms.std == doctest::Approx(weighted_std).epsilon(0.01));
  }

  TEST_CASE("weighted dataset export round-trips bit-exactly") {
    const std::string path = "test_export_tmp.csv";
    const std::vector<std::vector<double>> thetas = {{0.25, 1e-7}, {0.5, 2e-7}};
    const std::vector<std::vector<std::vector<double>>> summaries = {
        {{1.0, 2.0}, {3.0, 4.0}}, {{5.0, 6.0}, {7.0, 8.0}}};
    const std::vector<double> weights = {1.0 / 3.0, 2.0 / 3.0};
    export_weighted_dataset(thetas, summaries, weights, path, "casbi=test seed=0 config=0");
    const auto records = read_weighted_dataset(path, 2);
    REQUIRE(records.size() == 4);
    CHECK(records[0].theta == thetas[0]);
    CHECK(records[0].x == summaries[0][0]);
    CHECK(records[0].weight == weights[0]);
    CHECK(records[3].theta == thetas[1]);
    CHECK(records[3].x == summaries[1][1]);
    CHECK(records[3].weight == weights[1]);
    // Weights repeat per-theta and sum to 1 over distinct thetas.
    CHECK(records[0].weight + records[2].weight == doctest::Approx(1.0).epsilon(1e-12));
    std::remove(path.c_str());
  }

  TEST_CASE("single-record export carries weight one") {
    const std::string path = "test_export_single_tmp.csv";
    export_weighted_dataset({{1.0}}, {{{2.0}}}, std::vector<double>{1.0}, path,
                            "casbi=test seed=0 config=0");
    const auto records = read_weighted_dataset(path, 1);
    REQUIRE(records.size() == 1);
    CHECK(records[0].weight == 1.0);
    std::remove(path.c_str());
  }

  TEST_CASE("posterior CSV round-trips") {
    const std::string path = "test_posterior_tmp.csv";
    const auto post = toy_posterior({{0.1, 0.2}, {0.3, 0.4}}, {0.25, 0.75});
    write_posterior_csv(path, post, "casbi=test seed=0 config=0");
    const WeightedPosterior back = read_posterior_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back.thetas == post.thetas);
    CHECK(back.weights == post.weights);
    std::remove(path.c_str());
  }
}
