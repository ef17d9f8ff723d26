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

#ifndef CASBI_SIMULATORS_HPP
#define CASBI_SIMULATORS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "casbi/prior.hpp"
#include "casbi/rng.hpp"

namespace casbi {

/// Output of one simulate call: the summary statistics plus deterministic
/// virtual-cost units and the measured wall time.
struct SimResult {
  std::vector<double> summary;
  double virtual_cost = 0.0;
  double wall_seconds = 0.0;
};

/// Key identifying the RNG streams of one simulate call. Realisation r of
/// call `id` draws from RngStream(derive_key(seed, stream_tag::simulate, id, r)),
/// so outputs are bit-identical for any scheduling.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t id = 0;

  RngStream realisation_stream(std::uint64_t r) const {
    return RngStream(derive_key(seed, stream_tag::simulate, id, r));
  }
};

/// Gamma(theta, 1) simulator: each draw is a sum of floor(theta) unit
/// exponentials plus a fractional-shape rejection step, so the uniform-draw
/// count (the virtual cost) grows linearly with theta. Summary = (sample
/// mean, sample stddev) of m draws; stddev is 0 by convention for m = 1.
SimResult gamma_simulate(double theta, int m, const StreamKey& key);

/// Final epidemic size of the homogeneous SIR model: infectious periods
/// I ~ Gamma(k, k), offspring Z ~ Poisson(theta1 * I), Z Bernoulli(s/N)
/// contact trials. Virtual cost counts contact trials.
SimResult sir_homogeneous(double theta1, int population, double k_disp, const StreamKey& key);

/// Temporal SIR (Gillespie): total event rate (theta1/N) i s + theta2 i,
/// infection chosen with probability theta1 s / (theta1 s + N theta2).
/// Summary = (final size, duration T, removals per bin over [0, T]).
/// Virtual cost counts events.
SimResult sir_temporal(double theta1, double theta2, int population, int n_bins,
                       const StreamKey& key);

/// SIR on a Bernoulli(theta3) random graph with neighbour-weighted infection
/// targets. Summary as sir_temporal. Virtual cost counts events plus the
/// N(N-1)/2 edge draws.
SimResult sir_bernoulli(double theta1, double theta2, double theta3, int population, int n_bins,
                        const StreamKey& key);

/// Stochastic radio propagation channel parameters.
struct RadioParams {
  double reverb_gain = 1e-9;     // theta1
  double reverb_time = 1e-8;     // theta2, seconds
  double arrival_rate = 1e9;     // theta3, 1/s
  double noise_variance = 1e-27; // theta4

  static constexpr double bandwidth = 4e9;  // Hz
  static constexpr int n_freq = 801;
  static constexpr double delta_f = bandwidth / (n_freq - 1);
  static constexpr double t_max = 1.0 / delta_f;  // 2e-7 s
};

/// One radio channel realisation: frequency response with and without noise
/// plus the time-domain signal (inverse DFT with 1/N normalisation).
struct RadioRealisation {
  std::vector<std::complex<double>> freq_clean;  // H_l, l = 1..N_s
  std::vector<std::complex<double>> time;        // y_s, s = 0..N_s-1
  std::uint64_t n_points = 0;
};
RadioRealisation radio_realisation(const RadioParams& params, const StreamKey& key,
                                   std::uint64_t realisation);

/// Radio propagation simulator: m realisations of an 801-sample complex
/// signal driven by a Poisson arrival process; summary = sample means and
/// sample variances of the temporal moments M0, M1, M2 of |y(t)|^2.
/// Virtual cost per realisation: N_points * N_s + N_s * log2(N_s).
SimResult radio_simulate(const RadioParams& params, int m, const StreamKey& key);

/// Toy Gaussian simulator: summary = mean of m draws from Normal(theta, 1).
SimResult gaussian_toy_simulate(double theta, int m, const StreamKey& key);

/// Type-erased simulator with its default prior and summary layout.
class Simulator {
 public:
  using SimulateFn = std::function<SimResult(std::span<const double> theta, int m, const StreamKey&)>;

  Simulator(std::string name, std::size_t param_dim, std::size_t summary_dim, PriorSpec default_prior,
            int default_m, SimulateFn fn)
      : name_(std::move(name)),
        param_dim_(param_dim),
        summary_dim_(summary_dim),
        default_prior_(std::move(default_prior)),
        default_m_(default_m),
        fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  std::size_t param_dim() const { return param_dim_; }
  std::size_t summary_dim() const { return summary_dim_; }
  const PriorSpec& default_prior() const { return default_prior_; }
  int default_m() const { return default_m_; }

  SimResult simulate(std::span<const double> theta, int m, const StreamKey& key) const {
    return fn_(theta, m, key);
  }

 private:
  std::string name_;
  std::size_t param_dim_;
  std::size_t summary_dim_;
  PriorSpec default_prior_;
  int default_m_;
  SimulateFn fn_;
};

/// Builds a named simulator. Recognised names: gamma, sir_homogeneous,
/// sir_temporal, sir_bernoulli, radio, gaussian_toy. `options` can override
/// structural constants (population, n_bins, k_disp).
Simulator make_simulator(const std::string& name, const std::map<std::string, double>& options = {});

}  // namespace casbi

#endif
