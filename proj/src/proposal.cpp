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

#include "casbi/proposal.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

CostAwareProposal CostAwareProposal::make(PriorSpec prior, CostModel cost, PenaltySpec penalty,
                                          int grid_size, double safety_factor) {
  CostAwareProposal p{std::move(prior), std::move(cost), std::move(penalty), PenaltyBounds{}};
  p.bounds = penalty_bounds(p.penalty, p.cost, p.prior.support_box(), grid_size, safety_factor);
  return p;
}

double CostAwareProposal::acceptance_probability(std::span<const double> theta,
                                                 bool* clamped) const {
  const double ratio = bounds.g_min / penalty(cost.eval(theta));
  if (clamped != nullptr) *clamped = ratio > 1.0;
  return std::min(1.0, ratio);
}

WeightedSamples rejection_sample(const CostAwareProposal& proposal, std::size_t n,
                                 std::uint64_t seed, int workers, std::uint64_t component) {
  if (n < 1) throw DomainError("rejection_sample requires n >= 1");

  WeightedSamples out;
  out.thetas.resize(n);
  out.costs.resize(n);
  out.g_values.resize(n);
  std::vector<std::uint64_t> proposed(n, 0);
  std::vector<std::uint64_t> clamped(n, 0);
  std::vector<std::uint8_t> done(n, 0);
  std::atomic<bool> budget_blown{false};

  parallel_for(n, workers, [&](std::size_t i) {
    if (budget_blown.load(std::memory_order_relaxed)) return;
    RngStream rng(derive_key(seed, stream_tag::rejection, component, static_cast<std::uint64_t>(i)));
    for (std::uint64_t attempt = 0; attempt < proposal.max_attempts_per_accept; ++attempt) {
      std::vector<double> theta = proposal.prior.sample(rng);
      const double u = rng.uniform01();
      ++proposed[i];
      bool was_clamped = false;
      const double a = proposal.acceptance_probability(theta, &was_clamped);
      if (was_clamped) ++clamped[i];
      if (u <= a) {
        out.costs[i] = proposal.cost.eval(theta);
        out.g_values[i] = proposal.penalty(out.costs[i]);
        out.thetas[i] = std::move(theta);
        done[i] = 1;
        return;
      }
    }
    budget_blown.store(true, std::memory_order_relaxed);
  });

  std::uint64_t total_proposed = 0;
  std::uint64_t total_clamped = 0;
  std::uint64_t total_accepted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total_proposed += proposed[i];
    total_clamped += clamped[i];
    total_accepted += done[i];
  }
  if (budget_blown.load()) {
    const double rate = static_cast<double>(total_accepted) / static_cast<double>(total_proposed);
    throw BudgetExceededError("rejection sampling exhausted max_attempts_per_accept=" +
                                  std::to_string(proposal.max_attempts_per_accept) +
                                  "; empirical acceptance rate " + std::to_string(rate),
                              rate);
  }
  if (static_cast<double>(total_clamped) > 1e-3 * static_cast<double>(total_proposed)) {
    throw BoundsInvalidError("acceptance probability exceeded 1 on " +
                             std::to_string(total_clamped) + " of " +
                             std::to_string(total_proposed) +
                             " proposals; penalty bounds are invalid");
  }

  out.stats.proposed = total_proposed;
  out.stats.accepted = n;
  out.stats.clamped = total_clamped;
  const double total_g = pairwise_sum(out.g_values);
  if (!(total_g > 0.0) || !std::isfinite(total_g)) {
    throw DomainError("rejection_sample produced degenerate unnormalised weights");
  }
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.weights[i] = out.g_values[i] / total_g;
  return out;
}

std::vector<double> ca_weights(const std::vector<std::vector<double>>& thetas,
                               const CostModel& cost, const PenaltySpec& penalty) {
  if (thetas.empty()) throw DomainError("ca_weights requires at least one sample");
  std::vector<double> g(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    g[i] = penalty(cost.eval(thetas[i]));
    if (!std::isfinite(g[i])) throw DomainError("non-finite penalty value in ca_weights");
  }
  const double total = pairwise_sum(g);
  if (!(total > 0.0)) throw DomainError("ca_weights: unnormalised weights sum to zero");
  for (double& w : g) w /= total;
  return g;
}

Estimate ca_estimate(const WeightedSamples& samples, const Integrand& f) {
  const std::size_t n = samples.size();
  if (n == 0) throw DomainError("ca_estimate requires non-empty samples");
  std::vector<double> terms(n), values(n);
  std::string bad_indices;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = f(samples.thetas[i]);
    if (!std::isfinite(values[i])) {
      if (!bad_indices.empty()) bad_indices += ",";
      bad_indices += std::to_string(i);
    }
    terms[i] = samples.weights[i] * values[i];
  }
  if (!bad_indices.empty()) {
    throw DomainError("non-finite integrand values at indices " + bad_indices);
  }
  Estimate est;
  est.value = pairwise_sum(terms);
  // Delta-method variance for self-normalised importance sampling.
  std::vector<double> var_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - est.value;
    var_terms[i] = samples.weights[i] * samples.weights[i] * d * d;
  }
  est.std_error = std::sqrt(pairwise_sum(var_terms));
  return est;
}

MISPlan MISPlan::equal_powers(const std::vector<double>& ks, std::size_t total_n) {
  if (ks.empty()) throw DomainError("MIS plan requires at least one component");
  MISPlan plan;
  const std::size_t j = ks.size();
  for (std::size_t c = 0; c < j; ++c) {
    const std::size_t share = total_n / j + (c < total_n % j ? 1 : 0);
    plan.components.push_back({PenaltySpec::power(ks[c]), std::max<std::size_t>(1, share)});
  }
  plan.validate();
  return plan;
}

void MISPlan::validate() const {
  if (components.empty()) throw DomainError("MIS plan requires J >= 1 components");
  if (!components.front().penalty.is_constant()) {
    throw DomainError("MIS plan component 1 must be the constant-penalty target");
  }
  for (const auto& c : components) {
    if (c.n < 1) throw DomainError("MIS plan requires n_j >= 1 for every component");
  }
}

std::size_t MISPlan::total_n() const {
  std::size_t total = 0;
  for (const auto& c : components) total += c.n;
  return total;
}

MISResult mis_estimate(const MISPlan& plan, const PriorSpec& prior, const CostModel& cost,
                       const Integrand& f, std::uint64_t seed, int workers) {
  plan.validate();
  const double j = static_cast<double>(plan.components.size());
  MISResult result;
  std::vector<double> stratum_values;
  std::vector<double> stratum_variances;
  for (std::size_t c = 0; c < plan.components.size(); ++c) {
    const CostAwareProposal proposal =
        CostAwareProposal::make(prior, cost, plan.components[c].penalty);
    WeightedSamples samples =
        rejection_sample(proposal, plan.components[c].n, seed, workers, c);

    const Estimate stratum = ca_estimate(samples, f);
    stratum_values.push_back(stratum.value);
    stratum_variances.push_back(stratum.std_error * stratum.std_error);

    MISComponentReport report;
    report.stats = samples.stats;
    report.mean_cost = pairwise_sum(samples.costs) / static_cast<double>(samples.size());
    const double sum_g = pairwise_sum(samples.g_values);
    std::vector<double> g_sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) g_sq[i] = samples.g_values[i] * samples.g_values[i];
    report.ess = sum_g * sum_g / (static_cast<double>(samples.size()) * pairwise_sum(g_sq));
    result.components.push_back(report);
    result.samples.push_back(std::move(samples));
  }
  result.estimate.value = pairwise_sum(stratum_values) / j;
  result.estimate.std_error = std::sqrt(pairwise_sum(stratum_variances)) / j;
  return result;
}

void write_weighted_samples_csv(const std::string& path, const WeightedSamples& samples,
                                const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "# " << metadata << "\n";
  const std::size_t dim = samples.thetas.empty() ? 0 : samples.thetas[0].size();
  for (std::size_t d = 0; d < dim; ++d) out << "theta_" << d << ",";
  out << "cost,g_of_cost,weight\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (double t : samples.thetas[i]) out << fmt(t) << ",";
    out << fmt(samples.costs[i]) << "," << fmt(samples.g_values[i]) << ","
        << fmt(samples.weights[i]) << "\n";
  }
  std::ofstream meta(path + ".meta");
  if (!meta) throw IoError("cannot open for writing: " + path + ".meta");
  meta << "# " << metadata << "\n";
  meta << "proposed " << samples.stats.proposed << "\n";
  meta << "accepted " << samples.stats.accepted << "\n";
  meta << "clamped " << samples.stats.clamped << "\n";
  meta << "acceptance_rate "
       << fmt(static_cast<double>(samples.stats.accepted) /
              static_cast<double>(samples.stats.proposed))
       << "\n";
}

}  // namespace casbi
