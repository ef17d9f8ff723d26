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
#include <string>
#include <vector>

#include "casbi/cost_model.hpp"
#include "casbi/errors.hpp"
#include "casbi/math.hpp"
#include "casbi/rng.hpp"
#include "casbi/simulators.hpp"

using namespace casbi;

namespace {

std::vector<CostObservation> virtual_obs(const std::vector<double>& xs,
                                         const std::function<double(double)>& f) {
  std::vector<CostObservation> obs;
  for (double x : xs) obs.push_back({{x}, 0.0, f(x)});
  return obs;
}

}  // namespace

TEST_SUITE("costmodel") {
  TEST_CASE("named presets pin the two gamma cost readings") {
    const CostModel text = CostModel::preset("gamma-cost-text");
    CHECK(text.eval1(100.0) == doctest::Approx(2e-3));
    CHECK(text.eval1(1000.0) == doctest::Approx(2e-2));
    const CostModel table = CostModel::preset("gamma-cost-table");
    CHECK(table.eval1(100.0) == doctest::Approx(1e-3));
    CHECK(table.eval1(1000.0) == doctest::Approx(2.8e-3));
    CHECK_THROWS_AS(CostModel::preset("nope"), ConfigError);
  }

  TEST_CASE("floor clamp keeps evaluations strictly positive") {
    const CostModel m = CostModel::analytic_linear({1.0}, -10.0);
    CHECK(m.eval1(1.0) == doctest::Approx(1e-9));
    CHECK(m.eval_raw(std::vector<double>{1.0}) == doctest::Approx(-9.0));
  }

  TEST_CASE("exact line is recovered to near machine precision") {
    const auto obs = virtual_obs({100, 250, 400, 700, 1000}, [](double t) { return 2e-5 * t; });
    const CostModel m = fit_linear(obs);
    CHECK(m.coefficients()[0] == doctest::Approx(0.0).scale(2e-5).epsilon(1e-10));
    CHECK(m.coefficients()[1] == doctest::Approx(2e-5).epsilon(1e-12));
    CHECK(m.eval1(500.0) == doctest::Approx(1e-2).epsilon(1e-12));
  }

  TEST_CASE("constant observations give zero slope") {
    const auto obs = virtual_obs({1, 2, 3, 4}, [](double) { return 0.7; });
    const CostModel m = fit_linear(obs);
    CHECK(m.coefficients()[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(m.coefficients()[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  TEST_CASE("noisy linear data fits within 5 percent of the mean cost") {
    RngStream rng(derive_key(31, 0));
    std::vector<CostObservation> obs;
    for (int i = 0; i < 200; ++i) {
      const double t = rng.uniform(0.0, 10.0);
      const double y = 3.0 + 2.0 * t;
      obs.push_back({{t}, 0.0, y + 0.05 * 20.0 * rng.normal()});
    }
    const CostModel m = fit_linear(obs);
    std::vector<double> errors;
    for (int i = 0; i <= 50; ++i) {
      const double t = 10.0 * i / 50.0;
      errors.push_back(std::pow(m.eval1(t) - (3.0 + 2.0 * t), 2));
    }
    const double rmse = std::sqrt(pairwise_sum(errors) / errors.size());
    CHECK(rmse < 0.05 * 13.0);  // mean cost over the grid is 13
  }

  TEST_CASE("rank-deficient design names the deficient directions") {
    // theta_1 is a copy of theta_0: the design cannot identify them apart.
    std::vector<CostObservation> obs;
    for (double t : {1.0, 2.0, 3.0, 4.0}) obs.push_back({{t, t}, 0.0, t});
    CHECK_THROWS_WITH_AS(static_cast<void>(fit_linear(obs)),
                         doctest::Contains("deficient"), DomainError);
  }

  TEST_CASE("polynomial fit recovers a quadratic") {
    const auto obs =
        virtual_obs({0, 0.5, 1, 1.5, 2, 3}, [](double t) { return 1.0 + 2.0 * t * t; });
    const CostModel m = fit_polynomial(obs, 2);
    CHECK(m.eval1(2.5) == doctest::Approx(1.0 + 2.0 * 6.25).epsilon(1e-9));
  }

  TEST_CASE("GP interpolates training targets when noise is pinned to zero") {
    GpFitConfig config;
    config.noise_lo = 0.0;
    config.noise_hi = 1e-12;
    const auto obs = virtual_obs({0.0, 0.3, 0.55, 0.8, 1.0},
                                 [](double t) { return 1.0 + std::sin(3.0 * t); });
    const CostModel m = fit_gp(obs, config, 3);
    for (const auto& o : obs) {
      CHECK(m.eval(o.theta) == doctest::Approx(o.y_virtual).epsilon(1e-8));
    }
  }

  TEST_CASE("GP fits a smooth 2-D cost surface within 10 percent of its range") {
    // Surface shaped like the temporal epidemic cost: grows with the first
    // coordinate, shrinks with the second.
    const auto surface = [](double a, double b) { return 0.3 + 2.5 * a / (0.15 + b); };
    RngStream rng(derive_key(37, 0));
    std::vector<CostObservation> obs;
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(0.1, 1.0);
      const double b = rng.uniform(0.1, 1.0);
      obs.push_back({{a, b}, 0.0, surface(a, b)});
    }
    const CostModel m = fit_gp(obs, GpFitConfig{}, 5);
    std::vector<double> sq;
    double lo = 1e300;
    double hi = -1e300;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double a = 0.1 + 0.9 * i / 19.0;
        const double b = 0.1 + 0.9 * j / 19.0;
        const double truth = surface(a, b);
        lo = std::min(lo, truth);
        hi = std::max(hi, truth);
        sq.push_back(std::pow(m.eval(std::vector<double>{a, b}) - truth, 2));
      }
    }
    const double rmse = std::sqrt(pairwise_sum(sq) / sq.size());
    CHECK(rmse < 0.1 * (hi - lo));
  }

  TEST_CASE("GP stays strictly positive after clamping even with 15 points") {
    RngStream rng(derive_key(41, 0));
    std::vector<CostObservation> obs;
    for (int i = 0; i < 15; ++i) {
      const double t = rng.uniform(0.0, 1.0);
      obs.push_back({{t}, 0.0, 0.01 + 0.02 * std::sin(20.0 * t)});
    }
    const CostModel m = fit_gp(obs, GpFitConfig{}, 7);
    for (int i = 0; i <= 500; ++i) {
      CHECK(m.eval1(-0.5 + 2.0 * i / 500.0) >= m.floor());
    }
  }

  TEST_CASE("fits are bit-identical for the same observations and seed") {
    RngStream rng(derive_key(43, 0));
    std::vector<CostObservation> obs;
    for (int i = 0; i < 40; ++i) {
      const double t = rng.uniform(0.0, 2.0);
      obs.push_back({{t}, 0.0, 1.0 + t + 0.1 * rng.normal()});
    }
    const CostModel a = fit_gp(obs, GpFitConfig{}, 99);
    const CostModel b = fit_gp(obs, GpFitConfig{}, 99);
    REQUIRE(a.gp_data().has_value());
    CHECK(a.gp_data()->amplitude == b.gp_data()->amplitude);
    CHECK(a.gp_data()->noise_variance == b.gp_data()->noise_variance);
    for (std::size_t d = 0; d < a.gp_data()->lengthscales.size(); ++d) {
      CHECK(a.gp_data()->lengthscales[d] == b.gp_data()->lengthscales[d]);
    }
    const CostModel lin_a = fit_linear(obs);
    const CostModel lin_b = fit_linear(obs);
    CHECK(lin_a.coefficients() == lin_b.coefficients());
  }

  TEST_CASE("measure_cost reflects the gamma simulator's tenfold cost growth") {
    const Simulator sim = make_simulator("gamma");
    const std::vector<std::vector<double>> thetas = {{100.0}, {1000.0}};
    const auto obs = measure_cost(sim, thetas, 50, Clock::virtual_units, 3, 2);
    REQUIRE(obs.size() == 2);
    const double ratio = obs[1].y_virtual / obs[0].y_virtual;
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.2));
  }

  TEST_CASE("measure_cost with one rep equals that run's counter exactly") {
    const Simulator sim = make_simulator("gamma");
    const auto obs = measure_cost(sim, {{250.0}}, 1, Clock::virtual_units, 11, 1);
    const std::uint64_t id = (stream_tag::measure << 56) | 0;
    const SimResult direct = sim.simulate(std::vector<double>{250.0}, sim.default_m(),
                                          StreamKey{11, id});
    CHECK(obs[0].y_virtual == direct.virtual_cost);
  }

  TEST_CASE("radio virtual cost doubles with the arrival rate") {
    const Simulator sim = make_simulator("radio");
    const std::vector<std::vector<double>> thetas = {{5e-9, 5e-9, 2.5e9, 0.0},
                                                     {5e-9, 5e-9, 5e9, 0.0}};
    const auto obs = measure_cost(sim, thetas, 4, Clock::virtual_units, 17, 2);
    constexpr double n_s = RadioParams::n_freq;
    const double fft_units = n_s * std::log2(n_s);
    const auto expected = [&](double rate) {
      return rate * RadioParams::t_max * n_s + fft_units;
    };
    // Analytic mean of the per-realisation counter is the oracle.
    CHECK(obs[0].y_virtual / sim.default_m() ==
          doctest::Approx(expected(2.5e9)).epsilon(0.05));
    CHECK(obs[1].y_virtual / sim.default_m() == doctest::Approx(expected(5e9)).epsilon(0.05));
    CHECK(obs[1].y_virtual / obs[0].y_virtual == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("failed evaluations are excluded and reported") {
    const Simulator sim = make_simulator("gamma");
    MeasureReport report;
    const auto obs =
        measure_cost(sim, {{250.0}, {0.5}, {300.0}}, 1, Clock::virtual_units, 5, 1, &report);
    CHECK(obs[0].ok);
    CHECK_FALSE(obs[1].ok);
    CHECK(obs[2].ok);
    REQUIRE(report.failed_indices.size() == 1);
    CHECK(report.failed_indices[0] == 1);
    CHECK(report.summaries.size() == 2);
    // The failed point must not poison a fit.
    const CostModel m = fit_linear(obs);
    CHECK(m.eval1(250.0) > 0.0);
  }

  TEST_CASE("serialisation round-trips every variant") {
    const auto check_roundtrip = [](const CostModel& m, double at) {
      const CostModel back = CostModel::from_text(m.to_text());
      CHECK(back.kind() == m.kind());
      CHECK(back.eval1(at) == m.eval1(at));
    };
    check_roundtrip(CostModel::preset("gamma-cost-table"), 321.0);
    check_roundtrip(CostModel::analytic_quadratic({2.0}), 1.7);
    const auto obs = virtual_obs({1, 2, 3, 4, 5}, [](double t) { return 2.0 * t + 1.0; });
    check_roundtrip(fit_linear(obs), 2.5);
    check_roundtrip(fit_polynomial(obs, 2), 2.5);
    check_roundtrip(fit_gp(obs, GpFitConfig{}, 13), 2.5);
  }

  TEST_CASE("observation CSV round-trips") {
    RngStream rng(derive_key(47, 0));
    std::vector<CostObservation> obs;
    for (int i = 0; i < 20; ++i) {
      obs.push_back({{rng.uniform01(), rng.uniform01()}, rng.uniform01(), rng.uniform01()});
    }
    const std::string path = "test_cost_obs_tmp.csv";
    write_observations_csv(path, obs, "casbi=test seed=0 config=0");
    const auto back = read_observations_csv(path);
    REQUIRE(back.size() == obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      CHECK(back[i].theta == obs[i].theta);
      CHECK(back[i].y_seconds == obs[i].y_seconds);
      CHECK(back[i].y_virtual == obs[i].y_virtual);
    }
    std::remove(path.c_str());
  }
}
