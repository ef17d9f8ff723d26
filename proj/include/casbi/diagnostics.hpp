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

#ifndef CASBI_DIAGNOSTICS_HPP
#define CASBI_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "casbi/proposal.hpp"

namespace casbi {

/// Effective sample size (sum g)^2 / (n sum g^2) of a weighted sample.
double ess(const WeightedSamples& samples);
double ess_from_gvalues(std::span<const double> g_values);

/// Monte Carlo estimate of the computational gain: mean cost-model value
/// under the prior over the mean under the cost-aware proposal. No simulator
/// calls are made.
struct CgEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
CgEstimate estimate_cg(const PriorSpec& prior, const CostModel& cost, const PenaltySpec& penalty,
                       const PenaltyBounds& bounds, std::size_t n_mc, std::uint64_t seed,
                       int workers = 1);

/// Efficiency/cost summary for one penalty choice.
struct DiagnosticsReport {
  double ess = 1.0;
  double cg = 1.0;
  double cg_std_error = 0.0;
  double product = 1.0;  // cg * ess
  double g_min = 1.0;
  double g_max = 1.0;
  std::size_t n_mc = 0;
};
DiagnosticsReport diagnose_penalty(const PriorSpec& prior, const CostModel& cost,
                                   const PenaltySpec& penalty, std::size_t n_mc,
                                   std::uint64_t seed, int workers = 1);

/// Penalty selection by the CG x ESS criterion.
struct PenaltyCandidateReport {
  double k = 0.0;
  DiagnosticsReport report;
  bool selected = false;
};
struct SelectionResult {
  std::vector<PenaltyCandidateReport> candidates;
  std::vector<double> selected_ks;
  MISPlan recommended;   // constant + selected + up to two higher powers (k <= 3)
  bool none_passed = false;
};
SelectionResult select_penalties(const std::vector<double>& candidate_ks, const PriorSpec& prior,
                                 const CostModel& cost, std::size_t n_mc, double threshold,
                                 std::uint64_t seed, int workers = 1,
                                 std::size_t plan_total_n = 4);

}  // namespace casbi

#endif
