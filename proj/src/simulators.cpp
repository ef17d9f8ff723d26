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

#include "casbi/simulators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

namespace {

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Removal times binned over [0, T] into n_bins equal bins; the last removal
// defines T and lands in the final bin.
std::vector<double> bin_removals(const std::vector<double>& removal_times, double duration,
                                 int n_bins) {
  std::vector<double> bins(n_bins, 0.0);
  for (double t : removal_times) {
    int b = duration > 0.0 ? static_cast<int>(t / duration * n_bins) : 0;
    b = std::clamp(b, 0, n_bins - 1);
    bins[b] += 1.0;
  }
  return bins;
}

}  // namespace

SimResult gamma_simulate(double theta, int m, const StreamKey& key) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) {
    throw DomainError("gamma simulator requires shape >= 1");
  }
  if (m < 1) throw DomainError("gamma simulator requires m >= 1");
  WallTimer timer;
  std::vector<double> draws(m);
  std::uint64_t uniforms = 0;
  for (int i = 0; i < m; ++i) {
    RngStream rng = key.realisation_stream(static_cast<std::uint64_t>(i));
    draws[i] = gamma_sum_of_exponentials(rng, theta, &uniforms);
  }
  const MeanStd ms = mean_std(draws);
  SimResult result;
  // Sample stddev with the n-1 normalisation; 0 by convention for m = 1.
  const double stddev = m > 1 ? ms.std * std::sqrt(static_cast<double>(m) / (m - 1)) : 0.0;
  result.summary = {ms.mean, stddev};
  result.virtual_cost = static_cast<double>(uniforms);
  result.wall_seconds = timer.seconds();
  return result;
}

SimResult sir_homogeneous(double theta1, int population, double k_disp, const StreamKey& key) {
  if (population < 1) throw DomainError("sir_homogeneous requires population >= 1");
  if (!(theta1 >= 0.0) || !(k_disp > 0.0)) {
    throw DomainError("sir_homogeneous requires theta1 >= 0 and dispersion > 0");
  }
  WallTimer timer;
  RngStream rng = key.realisation_stream(0);
  const double n = static_cast<double>(population);
  long long infected = 1;
  long long susceptible = population - 1;
  std::uint64_t trials = 0;
  while (infected > 0) {
    const double period = gamma_sum_of_exponentials(rng, k_disp) / k_disp;
    const std::uint64_t contacts = rng.poisson(theta1 * period);
    for (std::uint64_t z = 0; z < contacts; ++z) {
      ++trials;
      if (rng.uniform01() < susceptible / n) {
        --susceptible;
        ++infected;
      }
    }
    --infected;
  }
  SimResult result;
  result.summary = {static_cast<double>(population - susceptible)};
  result.virtual_cost = static_cast<double>(trials);
  result.wall_seconds = timer.seconds();
  return result;
}

SimResult sir_temporal(double theta1, double theta2, int population, int n_bins,
                       const StreamKey& key) {
  if (population < 1 || n_bins < 1) {
    throw DomainError("sir_temporal requires population >= 1 and n_bins >= 1");
  }
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
    throw DomainError("sir_temporal requires positive rates");
  }
  WallTimer timer;
  RngStream rng = key.realisation_stream(0);
  const double n = static_cast<double>(population);
  long long infected = 1;
  long long susceptible = population - 1;
  double t = 0.0;
  std::uint64_t events = 0;
  std::vector<double> removal_times;
  while (infected > 0) {
    const double i = static_cast<double>(infected);
    const double s = static_cast<double>(susceptible);
    const double total_rate = theta1 / n * i * s + theta2 * i;
    t += rng.exponential(total_rate);
    ++events;
    if (rng.uniform01() < theta1 * s / (theta1 * s + n * theta2)) {
      ++infected;
      --susceptible;
    } else {
      --infected;
      removal_times.push_back(t);
    }
  }
  SimResult result;
  result.summary.reserve(2 + n_bins);
  result.summary.push_back(static_cast<double>(population - susceptible));
  result.summary.push_back(t);
  const auto bins = bin_removals(removal_times, t, n_bins);
  result.summary.insert(result.summary.end(), bins.begin(), bins.end());
  result.virtual_cost = static_cast<double>(events);
  result.wall_seconds = timer.seconds();
  return result;
}

SimResult sir_bernoulli(double theta1, double theta2, double theta3, int population, int n_bins,
                        const StreamKey& key) {
  if (population < 1 || n_bins < 1) {
    throw DomainError("sir_bernoulli requires population >= 1 and n_bins >= 1");
  }
  if (!(theta1 > 0.0) || !(theta2 > 0.0) || !(theta3 >= 0.0) || !(theta3 <= 1.0)) {
    throw DomainError("sir_bernoulli requires positive rates and edge probability in [0, 1]");
  }
  WallTimer timer;
  RngStream rng = key.realisation_stream(0);
  const int n = population;

  // Symmetric Bernoulli(theta3) graph, upper triangle drawn once.
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint8_t edge = rng.uniform01() < theta3 ? 1 : 0;
      adj[static_cast<std::size_t>(i) * n + j] = edge;
      adj[static_cast<std::size_t>(j) * n + i] = edge;
    }
  }
  const double edge_draws = 0.5 * static_cast<double>(n) * (n - 1);

  // state: 0 susceptible, 1 infectious, 2 removed.
  std::vector<std::uint8_t> state(n, 0);
  state[0] = 1;
  std::vector<int> infectious = {0};
  // infectious_degree[j] = number of infectious neighbours of susceptible j.
  std::vector<double> infectious_degree(n, 0.0);
  double edge_count = 0.0;  // sum over susceptible j of infectious_degree[j]
  for (int j = 1; j < n; ++j) {
    infectious_degree[j] = adj[static_cast<std::size_t>(0) * n + j];
    edge_count += infectious_degree[j];
  }

  double t = 0.0;
  std::uint64_t events = 0;
  std::vector<double> removal_times;
  while (!infectious.empty()) {
    const double i_count = static_cast<double>(infectious.size());
    const double infection_rate = theta1 * edge_count;
    const double total_rate = infection_rate + theta2 * i_count;
    t += rng.exponential(total_rate);
    ++events;
    if (rng.uniform01() < infection_rate / total_rate) {
      // Pick susceptible target with probability proportional to its number
      // of infectious neighbours.
      double u = rng.uniform01() * edge_count;
      int target = -1;
      for (int j = 0; j < n; ++j) {
        if (state[j] == 0 && infectious_degree[j] > 0.0) {
          u -= infectious_degree[j];
          if (u <= 0.0) {
            target = j;
            break;
          }
        }
      }
      if (target < 0) {
        for (int j = n - 1; j >= 0; --j) {
          if (state[j] == 0 && infectious_degree[j] > 0.0) {
            target = j;
            break;
          }
        }
      }
      state[target] = 1;
      infectious.push_back(target);
      edge_count -= infectious_degree[target];
      for (int j = 0; j < n; ++j) {
        if (state[j] == 0 && adj[static_cast<std::size_t>(target) * n + j]) {
          infectious_degree[j] += 1.0;
          edge_count += 1.0;
        }
      }
    } else {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform_index(infectious.size()));
      const int removed = infectious[pick];
      infectious[pick] = infectious.back();
      infectious.pop_back();
      state[removed] = 2;
      for (int j = 0; j < n; ++j) {
        if (state[j] == 0 && adj[static_cast<std::size_t>(removed) * n + j]) {
          infectious_degree[j] -= 1.0;
          edge_count -= 1.0;
        }
      }
      removal_times.push_back(t);
    }
  }

  SimResult result;
  result.summary.reserve(2 + n_bins);
  result.summary.push_back(static_cast<double>(removal_times.size()));
  result.summary.push_back(t);
  const auto bins = bin_removals(removal_times, t, n_bins);
  result.summary.insert(result.summary.end(), bins.begin(), bins.end());
  result.virtual_cost = static_cast<double>(events) + edge_draws;
  result.wall_seconds = timer.seconds();
  return result;
}

RadioRealisation radio_realisation(const RadioParams& params, const StreamKey& key,
                                   std::uint64_t realisation) {
  constexpr int n_s = RadioParams::n_freq;
  constexpr double two_pi = 6.283185307179586476925286766559;
  RngStream rng = key.realisation_stream(realisation);

  RadioRealisation out;
  out.n_points = rng.poisson(params.arrival_rate * RadioParams::t_max);
  std::vector<double> delays(out.n_points);
  for (auto& tau : delays) tau = rng.uniform(0.0, RadioParams::t_max);
  std::sort(delays.begin(), delays.end());

  std::vector<std::complex<double>> gains(out.n_points);
  for (std::uint64_t j = 0; j < out.n_points; ++j) {
    const double var = params.reverb_gain * std::exp(-delays[j] / params.reverb_time) /
                       (params.arrival_rate * RadioParams::bandwidth);
    const double s = std::sqrt(0.5 * var);
    gains[j] = {s * rng.normal(), s * rng.normal()};
  }

  out.freq_clean.assign(n_s, {0.0, 0.0});
  for (int l = 1; l <= n_s; ++l) {
    std::complex<double> h{0.0, 0.0};
    for (std::uint64_t j = 0; j < out.n_points; ++j) {
      const double phase = -two_pi * l * RadioParams::delta_f * delays[j];
      h += gains[j] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out.freq_clean[l - 1] = h;
  }

  std::vector<std::complex<double>> noisy(n_s);
  const double noise_scale = std::sqrt(0.5 * params.noise_variance);
  for (int l = 0; l < n_s; ++l) {
    noisy[l] = out.freq_clean[l] +
               std::complex<double>(noise_scale * rng.normal(), noise_scale * rng.normal());
  }

  // Inverse DFT with the 1/N normalisation on the inverse transform.
  out.time.assign(n_s, {0.0, 0.0});
  for (int s = 0; s < n_s; ++s) {
    std::complex<double> acc{0.0, 0.0};
    for (int l = 0; l < n_s; ++l) {
      const double phase = two_pi * l * s / static_cast<double>(n_s);
      acc += noisy[l] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out.time[s] = acc / static_cast<double>(n_s);
  }
  return out;
}

SimResult radio_simulate(const RadioParams& params, int m, const StreamKey& key) {
  if (m < 1) throw DomainError("radio simulator requires m >= 1");
  if (!(params.reverb_gain >= 0.0) || !(params.reverb_time > 0.0) ||
      !(params.arrival_rate > 0.0) || !(params.noise_variance >= 0.0)) {
    throw DomainError("radio simulator requires positive parameters");
  }
  constexpr int n_s = RadioParams::n_freq;
  const double dt = RadioParams::t_max / n_s;
  WallTimer timer;

  std::vector<double> m0(m), m1(m), m2(m);
  double virtual_cost = 0.0;
  const double fft_units = n_s * std::log2(static_cast<double>(n_s));
  for (int r = 0; r < m; ++r) {
    const RadioRealisation real = radio_realisation(params, key, static_cast<std::uint64_t>(r));
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (int s = 0; s < n_s; ++s) {
      const double power = std::norm(real.time[s]);
      const double t = s * RadioParams::t_max / n_s;
      s0 += power;
      s1 += t * power;
      s2 += t * t * power;
    }
    m0[r] = s0 * dt;
    m1[r] = s1 * dt;
    m2[r] = s2 * dt;
    virtual_cost += static_cast<double>(real.n_points) * n_s + fft_units;
  }

  const auto sample_var = [m](const std::vector<double>& v) {
    const MeanStd ms = mean_std(v);
    return m > 1 ? ms.std * ms.std * m / (m - 1) : 0.0;
  };
  SimResult result;
  result.summary = {mean_std(m0).mean, mean_std(m1).mean, mean_std(m2).mean,
                    sample_var(m0),    sample_var(m1),    sample_var(m2)};
  result.virtual_cost = virtual_cost;
  result.wall_seconds = timer.seconds();
  return result;
}

SimResult gaussian_toy_simulate(double theta, int m, const StreamKey& key) {
  if (m < 1) throw DomainError("gaussian toy simulator requires m >= 1");
  WallTimer timer;
  RngStream rng = key.realisation_stream(0);
  std::vector<double> draws(m);
  for (int i = 0; i < m; ++i) draws[i] = theta + rng.normal();
  SimResult result;
  result.summary = {mean_std(draws).mean};
  result.virtual_cost = static_cast<double>(m);
  result.wall_seconds = timer.seconds();
  return result;
}

Simulator make_simulator(const std::string& name, const std::map<std::string, double>& options) {
  const auto opt = [&](const std::string& k, double fallback) {
    const auto it = options.find(k);
    return it == options.end() ? fallback : it->second;
  };
  if (name == "gamma") {
    return Simulator(name, 1, 2, PriorSpec::box_uniform1(100.0, 1000.0), 500,
                     [](std::span<const double> theta, int m, const StreamKey& key) {
                       return gamma_simulate(theta[0], m, key);
                     });
  }
  if (name == "sir_homogeneous") {
    const int population = static_cast<int>(opt("population", 10000));
    const double k_disp = opt("k_disp", 1.0);
    return Simulator(name, 1, 1, PriorSpec::box_uniform1(1.0, 10.0), 1,
                     [population, k_disp](std::span<const double> theta, int, const StreamKey& key) {
                       return sir_homogeneous(theta[0], population, k_disp, key);
                     });
  }
  if (name == "sir_temporal") {
    const int population = static_cast<int>(opt("population", 1000));
    const int n_bins = static_cast<int>(opt("n_bins", 10));
    return Simulator(name, 2, 2 + n_bins, PriorSpec::box_uniform({0.1, 0.1}, {1.0, 1.0}), 1,
                     [population, n_bins](std::span<const double> theta, int, const StreamKey& key) {
                       return sir_temporal(theta[0], theta[1], population, n_bins, key);
                     });
  }
  if (name == "sir_bernoulli") {
    const int population = static_cast<int>(opt("population", 1000));
    const int n_bins = static_cast<int>(opt("n_bins", 10));
    return Simulator(name, 3, 2 + n_bins,
                     PriorSpec::box_uniform({0.1, 0.1, 0.1}, {1.0, 1.0, 1.0}), 1,
                     [population, n_bins](std::span<const double> theta, int, const StreamKey& key) {
                       return sir_bernoulli(theta[0], theta[1], theta[2], population, n_bins, key);
                     });
  }
  if (name == "radio") {
    return Simulator(name, 4, 6,
                     PriorSpec::box_uniform({1e-9, 1e-9, 1e8, 1e-28}, {1e-8, 1e-8, 1e9, 1e-26}), 50,
                     [](std::span<const double> theta, int m, const StreamKey& key) {
                       RadioParams params;
                       params.reverb_gain = theta[0];
                       params.reverb_time = theta[1];
                       params.arrival_rate = theta[2];
                       params.noise_variance = theta[3];
                       return radio_simulate(params, m, key);
                     });
  }
  if (name == "gaussian_toy") {
    return Simulator(name, 1, 1, PriorSpec::box_uniform1(-5.0, 5.0), 100,
                     [](std::span<const double> theta, int m, const StreamKey& key) {
                       return gaussian_toy_simulate(theta[0], m, key);
                     });
  }
  throw ConfigError("unknown simulator: " + name);
}

}  // namespace casbi
