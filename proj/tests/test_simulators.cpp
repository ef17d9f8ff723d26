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
#include <complex>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"
#include "casbi/simulators.hpp"

using namespace casbi;

TEST_SUITE("simulators") {
  TEST_CASE("gamma summary matches the analytic moments") {
    const SimResult res = gamma_simulate(250.0, 100000, StreamKey{1, 0});
    CHECK(std::abs(res.summary[0] - 250.0) < 4.0 * std::sqrt(250.0 / 100000.0));
    CHECK(res.summary[1] == doctest::Approx(std::sqrt(250.0)).epsilon(0.02));
  }

  TEST_CASE("gamma with one draw reports zero stddev") {
    const SimResult res = gamma_simulate(123.4, 1, StreamKey{2, 0});
    CHECK(res.summary[1] == 0.0);
  }

  TEST_CASE("gamma virtual cost scales tenfold across the prior") {
    const SimResult cheap = gamma_simulate(100.0, 200, StreamKey{3, 0});
    const SimResult dear = gamma_simulate(1000.0, 200, StreamKey{3, 1});
    CHECK(dear.virtual_cost / cheap.virtual_cost == doctest::Approx(10.0).epsilon(0.05));
  }

  TEST_CASE("gamma rejects shapes below one") {
    CHECK_THROWS_AS(gamma_simulate(0.99, 10, StreamKey{4, 0}), DomainError);
  }

  TEST_CASE("simulators are bit-identical given the same key") {
    const StreamKey key{42, 7};
    const SimResult a = gamma_simulate(321.5, 50, key);
    const SimResult b = gamma_simulate(321.5, 50, key);
    CHECK(a.summary == b.summary);
    CHECK(a.virtual_cost == b.virtual_cost);
    const SimResult c = sir_temporal(0.6, 0.3, 500, 10, key);
    const SimResult d = sir_temporal(0.6, 0.3, 500, 10, key);
    CHECK(c.summary == d.summary);
    const SimResult e = radio_simulate(RadioParams{}, 3, key);
    const SimResult f = radio_simulate(RadioParams{}, 3, key);
    CHECK(e.summary == f.summary);
  }

  TEST_CASE("homogeneous SIR edge cases") {
    CHECK(sir_homogeneous(0.0, 10000, 1.0, StreamKey{5, 0}).summary[0] == 1.0);
    CHECK(sir_homogeneous(5.0, 1, 1.0, StreamKey{5, 1}).summary[0] == 1.0);
  }

  TEST_CASE("homogeneous SIR mean final size grows with the infection rate") {
    const int reps = 500;
    double previous = -1.0;
    for (double rate : {1.0, 5.0, 10.0}) {
      std::vector<double> sizes(reps);
      for (int r = 0; r < reps; ++r) {
        sizes[r] = sir_homogeneous(rate, 10000, 1.0,
                                   StreamKey{6, static_cast<std::uint64_t>(r)})
                       .summary[0];
      }
      const double mean = pairwise_sum(sizes) / reps;
      CHECK(mean > previous);
      previous = mean;
    }
  }

  TEST_CASE("temporal SIR with a vanishing infection rate dies immediately") {
    const SimResult res = sir_temporal(1e-12, 0.5, 1000, 10, StreamKey{7, 0});
    CHECK(res.summary[0] == 1.0);
    double bin_total = 0.0;
    for (std::size_t b = 2; b < res.summary.size(); ++b) bin_total += res.summary[b];
    CHECK(bin_total == 1.0);
  }

  TEST_CASE("temporal SIR bins always account for every removal") {
    RngStream rng(derive_key(8, 0));
    for (int r = 0; r < 1000; ++r) {
      const double th1 = rng.uniform(0.1, 1.0);
      const double th2 = rng.uniform(0.1, 1.0);
      const SimResult res =
          sir_temporal(th1, th2, 300, 10, StreamKey{9, static_cast<std::uint64_t>(r)});
      double bin_total = 0.0;
      for (std::size_t b = 2; b < res.summary.size(); ++b) bin_total += res.summary[b];
      CHECK(bin_total == res.summary[0]);
    }
  }

  TEST_CASE("temporal SIR respects the reproduction-number ordering") {
    const int reps = 200;
    double fast_mean = 0.0;
    double slow_mean = 0.0;
    for (int r = 0; r < reps; ++r) {
      fast_mean +=
          sir_temporal(0.9, 0.1, 1000, 10, StreamKey{10, static_cast<std::uint64_t>(r)})
              .summary[0];
      slow_mean +=
          sir_temporal(0.1, 0.9, 1000, 10, StreamKey{11, static_cast<std::uint64_t>(r)})
              .summary[0];
    }
    CHECK(fast_mean / reps > slow_mean / reps);
  }

  TEST_CASE("bernoulli SIR with an empty graph never spreads") {
    const SimResult res = sir_bernoulli(0.5, 0.5, 0.0, 200, 10, StreamKey{12, 0});
    CHECK(res.summary[0] == 1.0);
  }

  TEST_CASE("bernoulli SIR bins account for every removal") {
    RngStream rng(derive_key(13, 0));
    for (int r = 0; r < 100; ++r) {
      const SimResult res =
          sir_bernoulli(rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), 120,
                        10, StreamKey{14, static_cast<std::uint64_t>(r)});
      double bin_total = 0.0;
      for (std::size_t b = 2; b < res.summary.size(); ++b) bin_total += res.summary[b];
      CHECK(bin_total == res.summary[0]);
    }
  }

  TEST_CASE("bernoulli SIR on the complete graph reduces to the temporal model") {
    // Rate matching: theta1_temporal / N = theta1_bernoulli on a complete graph.
    const int n = 1000;
    const int reps = 200;
    std::vector<double> bern(reps), temp(reps);
    for (int r = 0; r < reps; ++r) {
      bern[r] = sir_bernoulli(0.6 / n, 0.5, 1.0, n, 10,
                              StreamKey{15, static_cast<std::uint64_t>(r)})
                    .summary[0];
      temp[r] = sir_temporal(0.6, 0.5, n, 10, StreamKey{16, static_cast<std::uint64_t>(r)})
                    .summary[0];
    }
    const MeanStd mb = mean_std(bern);
    const MeanStd mt = mean_std(temp);
    const double combined_se =
        std::sqrt(mb.std * mb.std / reps + mt.std * mt.std / reps);
    CHECK(std::abs(mb.mean - mt.mean) < 4.0 * combined_se);
  }

  TEST_CASE("radio moments vanish without gain and noise") {
    RadioParams params;
    params.reverb_gain = 0.0;
    params.noise_variance = 0.0;
    const SimResult res = radio_simulate(params, 5, StreamKey{17, 0});
    for (double v : res.summary) CHECK(v == 0.0);
  }

  TEST_CASE("radio mean channel power matches the point-process expectation") {
    RadioParams params;
    params.reverb_gain = 2e-9;
    params.reverb_time = 5e-9;
    params.arrival_rate = 5e8;
    params.noise_variance = 0.0;
    const int m = 2000;
    const SimResult res = radio_simulate(params, m, StreamKey{18, 0});
    // With zero noise, M0 = dt * (1/N) sum |H_l|^2 by the transform's
    // normalisation, so the analytic E|H_l|^2 pins down E[M0].
    const double expected_power = params.reverb_gain * params.reverb_time /
                                  RadioParams::bandwidth *
                                  (1.0 - std::exp(-RadioParams::t_max / params.reverb_time));
    const double dt = RadioParams::t_max / RadioParams::n_freq;
    CHECK(res.summary[0] == doctest::Approx(expected_power * dt).epsilon(0.05));
  }

  TEST_CASE("radio point counts follow the Poisson mean") {
    RadioParams params;
    params.arrival_rate = 5e8;  // mean 100 points per realisation
    const double mean = params.arrival_rate * RadioParams::t_max;
    const int m = 300;
    std::vector<double> counts(m);
    for (int r = 0; r < m; ++r) {
      counts[r] = static_cast<double>(
          radio_realisation(params, StreamKey{19, 0}, static_cast<std::uint64_t>(r)).n_points);
    }
    const double empirical = pairwise_sum(counts) / m;
    CHECK(std::abs(empirical - mean) < 3.0 * std::sqrt(mean / m));
  }

  TEST_CASE("radio transform satisfies the discrete Parseval identity") {
    RadioParams params;
    params.noise_variance = 0.0;
    for (std::uint64_t r = 0; r < 5; ++r) {
      const RadioRealisation real = radio_realisation(params, StreamKey{20, 0}, r);
      double freq_power = 0.0;
      for (const auto& h : real.freq_clean) freq_power += std::norm(h);
      double time_power = 0.0;
      for (const auto& y : real.time) time_power += std::norm(y);
      CHECK(time_power ==
            doctest::Approx(freq_power / RadioParams::n_freq).epsilon(1e-9));
    }
  }

  TEST_CASE("radio zero-point realisations are valid noise-only signals") {
    RadioParams params;
    params.arrival_rate = 1.0;  // expected points essentially zero
    params.noise_variance = 1e-27;
    const SimResult res = radio_simulate(params, 3, StreamKey{21, 0});
    for (double v : res.summary) CHECK(std::isfinite(v));
    CHECK(res.summary[0] > 0.0);
  }

  TEST_CASE("gaussian toy summary is the sample mean") {
    const SimResult res = gaussian_toy_simulate(2.0, 100000, StreamKey{22, 0});
    CHECK(std::abs(res.summary[0] - 2.0) < 4.0 / std::sqrt(100000.0));
    CHECK(res.virtual_cost == 100000.0);
  }

  TEST_CASE("factory wires names, dimensions, and default priors") {
    const Simulator gamma = make_simulator("gamma");
    CHECK(gamma.param_dim() == 1);
    CHECK(gamma.summary_dim() == 2);
    const Simulator temporal = make_simulator("sir_temporal", {{"population", 500}});
    CHECK(temporal.summary_dim() == 12);
    const SimResult res = temporal.simulate(std::vector<double>{0.5, 0.5}, 1, StreamKey{23, 0});
    CHECK(res.summary.size() == 12);
    CHECK_THROWS_AS(make_simulator("unknown"), ConfigError);
  }
}
