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

#include "casbi/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

double ess_from_gvalues(std::span<const double> g_values) {
  if (g_values.empty()) throw DomainError("ess requires at least one sample");
  for (double g : g_values) {
    if (!std::isfinite(g)) throw DomainError("non-finite unnormalised weight in ess");
  }
  const double sum = pairwise_sum(g_values);
  std::vector<double> sq(g_values.size());
  for (std::size_t i = 0; i < g_values.size(); ++i) sq[i] = g_values[i] * g_values[i];
  const double sum_sq = pairwise_sum(sq);
  return sum * sum / (static_cast<double>(g_values.size()) * sum_sq);
}

double ess(const WeightedSamples& samples) { return ess_from_gvalues(samples.g_values); }

CgEstimate estimate_cg(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
                       const PenaltyBounds& bounds, std::size_t n_mc, std::uint64_t seed,
                       int workers) {
  if (n_mc < 100) throw DomainError("estimate_cg requires n_mc >= 100");

  // Numerator: mean model cost under the prior.
  std::vector<double> prior_costs(n_mc);
  parallel_for(n_mc, workers, [&](std::size_t i) {
    RngStream rng(derive_key(seed, stream_tag::cg_monte_carlo, std::uint64_t{0}, i));
    prior_costs[i] = cost.eval(prior.sample(rng));
  });

  // Denominator: mean model cost under the cost-aware proposal.
  CostAwareProposal proposal{prior, cost, penalty, bounds};
  const WeightedSamples draws =
      rejection_sample(proposal, n_mc, derive_key(seed, stream_tag::cg_monte_carlo), workers);

  const double mean_prior = pairwise_sum(prior_costs) / static_cast<double>(n_mc);
  const double mean_prop = pairwise_sum(draws.costs) / static_cast<double>(n_mc);

  const auto variance = [n_mc](std::span<const double> v, double mean) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - mean;
      sq[i] = d * d;
    }
    return pairwise_sum(sq) / static_cast<double>(n_mc - 1);
  };
  const double var_prior = variance(prior_costs, mean_prior);
  const double var_prop = variance(draws.costs, mean_prop);

  CgEstimate cg;
  cg.value = mean_prior / mean_prop;
  // Delta method for a ratio of independent means.
  cg.std_error = cg.value * std::sqrt(var_prior / (mean_prior * mean_prior) +
                                      var_prop / (mean_prop * mean_prop)) /
                 std::sqrt(static_cast<double>(n_mc));
  return cg;
}

DiagnosticsReport diagnose_penalty(const PriorSpec& prior, const CostModel& cost,
                                   const PenaltySpec& penalty, std::size_t n_mc,
                                   std::uint64_t seed, int workers) {
  DiagnosticsReport report;
  report.n_mc = n_mc;
  const PenaltyBounds bounds = penalty_bounds(penalty, cost, prior.support_box());
  report.g_min = bounds.g_min;
  report.g_max = bounds.g_max;

  const CgEstimate cg = estimate_cg(prior, cost, penalty, bounds, n_mc, seed, workers);
  report.cg = cg.value;
  report.cg_std_error = cg.std_error;

  // Asymptotic ESS from proposal draws (reuses the estimator's draw stream).
  CostAwareProposal proposal{prior, cost, penalty, bounds};
  const WeightedSamples draws =
      rejection_sample(proposal, n_mc, derive_key(seed, stream_tag::cg_monte_carlo), workers);
  report.ess = ess(draws);
  report.product = report.cg * report.ess;
  return report;
}

SelectionResult select_penalties(const std::vector<double>& candidate_ks, const PriorSpec& prior,
                                 const CostModel& cost, std::size_t n_mc, double threshold,
                                 std::uint64_t seed, int workers, std::size_t plan_total_n) {
  if (candidate_ks.empty()) throw DomainError("select_penalties requires candidates");

  SelectionResult result;
  for (double k : candidate_ks) {
    PenaltyCandidateReport candidate;
    candidate.k = k;
    candidate.report = diagnose_penalty(prior, cost, PenaltySpec::power(k), n_mc, seed, workers);
    candidate.selected = candidate.report.product >= threshold;
    if (candidate.selected && k > 0.0) result.selected_ks.push_back(k);
    result.candidates.push_back(std::move(candidate));
  }
  std::sort(result.selected_ks.begin(), result.selected_ks.end());

  std::vector<double> plan_ks = {0.0};
  if (result.selected_ks.empty()) {
    result.none_passed = true;
  } else {
    plan_ks.insert(plan_ks.end(), result.selected_ks.begin(), result.selected_ks.end());
    // Pad with up to two higher powers beyond the largest selected, capped at 3.
    const double top = result.selected_ks.back();
    for (double extra : {top + 1.0, top + 2.0}) {
      const double k = std::min(extra, 3.0);
      if (std::find(plan_ks.begin(), plan_ks.end(), k) == plan_ks.end()) plan_ks.push_back(k);
    }
  }
  result.recommended = MISPlan::equal_powers(plan_ks, std::max(plan_total_n, plan_ks.size()));
  return result;
}

}  // namespace casbi
