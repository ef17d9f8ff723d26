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

#ifndef CASBI_PROPOSAL_HPP
#define CASBI_PROPOSAL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "casbi/cost_model.hpp"
#include "casbi/penalty.hpp"
#include "casbi/prior.hpp"

namespace casbi {

/// Proposal proportional to prior(theta) / penalty(cost(theta)), sampled by
/// rejection from the prior with acceptance probability g_min / g(c(theta)).
/// The normalisation constant is never needed: weights self-normalise.
struct CostAwareProposal {
  PriorSpec prior;
  CostModel cost;
  PenaltySpec penalty;
  PenaltyBounds bounds;
  std::uint64_t max_attempts_per_accept = 10'000'000;

  /// Builds the proposal, computing penalty bounds over the prior support.
  static CostAwareProposal make(PriorSpec prior, CostModel cost, PenaltySpec penalty,
                                int grid_size = 0, double safety_factor = 0.999);

  /// min(1, g_min / g(c(theta))); `clamped`, when given, is set if the
  /// unclamped ratio exceeded 1 (a bounds violation).
  double acceptance_probability(std::span<const double> theta, bool* clamped = nullptr) const;
};

struct AcceptanceStats {
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t clamped = 0;
};

/// Parameter draws with self-normalised cost-aware weights.
struct WeightedSamples {
  std::vector<std::vector<double>> thetas;
  std::vector<double> costs;     // c(theta_i)
  std::vector<double> g_values;  // unnormalised weights g(c(theta_i))
  std::vector<double> weights;   // normalised, sum to 1
  AcceptanceStats stats;

  std::size_t size() const { return thetas.size(); }
};

/// Draws n points from the cost-aware proposal. Each accept index runs its
/// own attempt loop on its own RNG stream, so the output is identical for any
/// worker count. Throws BudgetExceededError when an index exhausts
/// max_attempts_per_accept and BoundsInvalidError when the clamp fraction
/// exceeds 1e-3 of proposed draws.
WeightedSamples rejection_sample(const CostAwareProposal& proposal, std::size_t n,
                                 std::uint64_t seed, int workers = 1, std::uint64_t component = 0);

/// Normalised cost-aware weights g(c(theta_i)) / sum_j g(c(theta_j)).
std::vector<double> ca_weights(const std::vector<std::vector<double>>& thetas,
                               const CostModel& cost, const PenaltySpec& penalty);

/// Scalar integrand over parameters.
using Integrand = std::function<double(std::span<const double>)>;

/// Self-normalised importance sampling estimate with a delta-method standard
/// error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};
Estimate ca_estimate(const WeightedSamples& samples, const Integrand& f);

/// Multiple importance sampling plan: component 1 must be the (constant
/// penalty) target itself; the rest are cost-aware proposals.
struct MISPlan {
  struct Component {
    PenaltySpec penalty;
    std::size_t n = 1;
  };
  std::vector<Component> components;

  static MISPlan equal_powers(const std::vector<double>& ks, std::size_t total_n);
  void validate() const;
  std::size_t total_n() const;
};

/// Per-component diagnostics of a multiple-importance-sampling run.
struct MISComponentReport {
  double ess = 0.0;
  double mean_cost = 0.0;
  AcceptanceStats stats;
};

struct MISResult {
  Estimate estimate;
  std::vector<MISComponentReport> components;
  std::vector<WeightedSamples> samples;  // per component, in plan order
};

/// Estimates E_pi[f] by combining the strata with the fixed coefficient 1/J.
MISResult mis_estimate(const MISPlan& plan, const PriorSpec& prior, const CostModel& cost,
                       const Integrand& f, std::uint64_t seed, int workers = 1);

/// CSV persistence: columns theta_0..theta_{p-1},cost,g_of_cost,weight plus a
/// sidecar `<path>.meta` with the acceptance stats.
void write_weighted_samples_csv(const std::string& path, const WeightedSamples& samples,
                                const std::string& metadata);

}  // namespace casbi

#endif
