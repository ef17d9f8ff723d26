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

#include "casbi/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"

namespace casbi {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string distance_quantiles_message(std::vector<double> distances) {
  std::sort(distances.begin(), distances.end());
  const auto q = [&](double p) {
    const std::size_t i = std::min(distances.size() - 1,
                                   static_cast<std::size_t>(p * (distances.size() - 1)));
    return distances[i];
  };
  std::ostringstream out;
  out << "no particles accepted; observed distance quantiles: min=" << q(0.0)
      << " p1=" << q(0.01) << " p5=" << q(0.05) << " p25=" << q(0.25) << " p50=" << q(0.5);
  return out.str();
}

struct StratumDraws {
  std::vector<std::vector<double>> thetas;
  std::vector<double> g_values;  // unnormalised cost-aware weights
  AcceptanceStats stats;
};

}  // namespace

double ObservedData::distance_to(std::span<const double> other) const {
  if (other.size() != summary.size()) {
    throw DomainError("distance_to called with mismatched summary dimension");
  }
  double s = 0.0;
  for (std::size_t d = 0; d < summary.size(); ++d) {
    const double diff = (summary[d] - other[d]) / scale[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

ObservedData make_observed(const Simulator& sim, const PriorSpec& prior,
                           std::span<const double> theta_true, int m, std::size_t n_pilot,
                           std::uint64_t seed, int workers) {
  if (n_pilot < 2) throw DomainError("make_observed requires n_pilot >= 2");
  ObservedData obs;
  obs.theta_true = std::vector<double>(theta_true.begin(), theta_true.end());

  const SimResult res =
      sim.simulate(theta_true, m, StreamKey{seed, stream_tag::observed << 56});
  obs.summary = res.summary;

  // Pilot prior run for per-dimension location/scale of the distance.
  std::vector<std::vector<double>> pilot(n_pilot);
  parallel_for(n_pilot, workers, [&](std::size_t i) {
    RngStream rng(derive_key(seed, stream_tag::pilot, i));
    const std::vector<double> theta = prior.sample(rng);
    pilot[i] = sim.simulate(theta, m, StreamKey{seed, (stream_tag::pilot << 56) | i}).summary;
  });

  const std::size_t dim = obs.summary.size();
  obs.location.resize(dim);
  obs.scale.resize(dim);
  std::vector<double> column(n_pilot);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < n_pilot; ++i) column[i] = pilot[i][d];
    const MeanStd ms = mean_std(column);
    obs.location[d] = ms.mean;
    obs.scale[d] = ms.std > 0.0 ? ms.std : 1.0;
  }
  return obs;
}

namespace {

// Draws the stratum's parameters, simulates them, and returns the accepted
// particles with their unnormalised weights. Budget is the number of
// simulated (proposed) parameter draws.
StratumDraws run_stratum(const Simulator& sim, const PriorSpec& prior, const CostModel& cost,
                         const PenaltySpec* penalty, const PenaltyBounds* bounds,
                         const ObservedData& observed, double epsilon, std::size_t n_draws, int m,
                         std::uint64_t seed, std::uint64_t component, int workers,
                         double* virtual_cost, std::vector<double>* all_distances) {
  // Parameter draws (no simulator involved).
  std::vector<std::vector<double>> thetas(n_draws);
  AcceptanceStats sampling_stats;
  if (penalty == nullptr) {
    parallel_for(n_draws, workers, [&](std::size_t i) {
      RngStream rng(derive_key(seed, stream_tag::rejection, component, i));
      thetas[i] = prior.sample(rng);
    });
    sampling_stats.proposed = n_draws;
    sampling_stats.accepted = n_draws;
  } else {
    CostAwareProposal proposal{prior, cost, *penalty, *bounds};
    WeightedSamples draws = rejection_sample(proposal, n_draws, seed, workers, component);
    thetas = std::move(draws.thetas);
    sampling_stats = draws.stats;
  }

  // Simulate every proposed draw and test the distance.
  std::vector<double> distances(n_draws);
  std::vector<double> vc(n_draws);
  parallel_for(n_draws, workers, [&](std::size_t i) {
    const std::uint64_t id = (component << 48) | i;
    const SimResult res = sim.simulate(thetas[i], m, StreamKey{seed, id});
    distances[i] = observed.distance_to(res.summary);
    vc[i] = res.virtual_cost;
  });
  *virtual_cost += pairwise_sum(vc);
  all_distances->insert(all_distances->end(), distances.begin(), distances.end());

  StratumDraws out;
  out.stats = sampling_stats;
  for (std::size_t i = 0; i < n_draws; ++i) {
    if (distances[i] <= epsilon) {
      out.g_values.push_back(penalty == nullptr ? 1.0 : (*penalty)(cost.eval(thetas[i])));
      out.thetas.push_back(std::move(thetas[i]));
    }
  }
  return out;
}

}  // namespace

WeightedPosterior abc_rejection(const Simulator& sim, const SamplingSpec& sampling,
                                const PriorSpec& prior, const CostModel& cost,
                                const ObservedData& observed, double epsilon,
                                std::size_t n_budget, int m, std::uint64_t seed, int workers) {
  if (!(epsilon > 0.0)) throw DomainError("abc_rejection requires epsilon > 0");
  if (n_budget < 1) throw DomainError("abc_rejection requires n_budget >= 1");

  WeightedPosterior posterior;
  posterior.epsilon = epsilon;
  std::vector<double> all_distances;
  all_distances.reserve(n_budget);
  double virtual_cost = 0.0;

  std::vector<StratumDraws> strata;
  if (std::holds_alternative<PriorSampling>(sampling)) {
    strata.push_back(run_stratum(sim, prior, cost, nullptr, nullptr, observed, epsilon, n_budget,
                                 m, seed, 0, workers, &virtual_cost, &all_distances));
  } else if (const auto* proposal = std::get_if<CostAwareProposal>(&sampling)) {
    strata.push_back(run_stratum(sim, proposal->prior, proposal->cost, &proposal->penalty,
                                 &proposal->bounds, observed, epsilon, n_budget, m, seed, 0,
                                 workers, &virtual_cost, &all_distances));
  } else {
    const MISPlan& plan = std::get<MISPlan>(sampling);
    plan.validate();
    const std::size_t j = plan.components.size();
    for (std::size_t c = 0; c < j; ++c) {
      const std::size_t share = n_budget / j + (c < n_budget % j ? 1 : 0);
      if (share == 0) continue;
      if (plan.components[c].penalty.is_constant()) {
        strata.push_back(run_stratum(sim, prior, cost, nullptr, nullptr, observed, epsilon, share,
                                     m, seed, c, workers, &virtual_cost, &all_distances));
      } else {
        const PenaltyBounds bounds =
            penalty_bounds(plan.components[c].penalty, cost, prior.support_box());
        strata.push_back(run_stratum(sim, prior, cost, &plan.components[c].penalty, &bounds,
                                     observed, epsilon, share, m, seed, c, workers, &virtual_cost,
                                     &all_distances));
      }
    }
  }

  std::size_t non_empty = 0;
  for (const auto& stratum : strata) {
    if (!stratum.thetas.empty()) ++non_empty;
    // Budget accounting: every parameter draw handed to the simulator.
    posterior.n_proposed += stratum.stats.accepted;
  }
  if (non_empty == 0) {
    throw EmptyPosteriorError(distance_quantiles_message(std::move(all_distances)));
  }

  // Per-stratum self-normalised weights scaled by 1/(number of non-empty
  // strata) so the combined weights sum to 1.
  const double stratum_coefficient = 1.0 / static_cast<double>(non_empty);
  for (auto& stratum : strata) {
    if (stratum.thetas.empty()) continue;
    const double total_g = pairwise_sum(stratum.g_values);
    for (std::size_t i = 0; i < stratum.thetas.size(); ++i) {
      posterior.thetas.push_back(std::move(stratum.thetas[i]));
      posterior.weights.push_back(stratum_coefficient * stratum.g_values[i] / total_g);
    }
  }

  posterior.n_accepted = posterior.thetas.size();
  posterior.acceptance_rate =
      static_cast<double>(posterior.n_accepted) / static_cast<double>(posterior.n_proposed);
  posterior.total_virtual_cost = virtual_cost;
  return posterior;
}

PosteriorStats posterior_stats(const WeightedPosterior& posterior,
                               std::vector<double> quantile_levels) {
  if (posterior.size() == 0) throw DomainError("posterior_stats requires particles");
  const std::size_t p = posterior.thetas[0].size();
  const std::size_t n = posterior.size();

  PosteriorStats stats;
  stats.quantile_levels = std::move(quantile_levels);
  stats.mean.assign(p, 0.0);
  std::vector<double> terms(n);
  for (std::size_t d = 0; d < p; ++d) {
    for (std::size_t i = 0; i < n; ++i) terms[i] = posterior.weights[i] * posterior.thetas[i][d];
    stats.mean[d] = pairwise_sum(terms);
  }

  stats.covariance.assign(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        terms[i] = posterior.weights[i] * (posterior.thetas[i][a] - stats.mean[a]) *
                   (posterior.thetas[i][b] - stats.mean[b]);
      }
      const double cov = pairwise_sum(terms);
      stats.covariance[a * p + b] = cov;
      stats.covariance[b * p + a] = cov;
    }
  }

  stats.quantiles.assign(p, std::vector<double>(stats.quantile_levels.size(), 0.0));
  std::vector<double> column(n);
  for (std::size_t d = 0; d < p; ++d) {
    for (std::size_t i = 0; i < n; ++i) column[i] = posterior.thetas[i][d];
    for (std::size_t q = 0; q < stats.quantile_levels.size(); ++q) {
      stats.quantiles[d][q] =
          weighted_quantile(column, posterior.weights, stats.quantile_levels[q]);
    }
  }
  return stats;
}

std::vector<std::vector<double>> resample(const WeightedPosterior& posterior, std::size_t size,
                                          std::uint64_t seed) {
  if (size < 1) throw DomainError("resample requires size >= 1");
  if (posterior.size() == 0) throw DomainError("resample requires particles");
  RngStream rng(derive_key(seed, stream_tag::resample));
  const double offset = rng.uniform01() / static_cast<double>(size);
  std::vector<std::vector<double>> out;
  out.reserve(size);
  double cumulative = posterior.weights[0];
  std::size_t index = 0;
  for (std::size_t j = 0; j < size; ++j) {
    const double u = offset + static_cast<double>(j) / static_cast<double>(size);
    while (u > cumulative && index + 1 < posterior.size()) {
      ++index;
      cumulative += posterior.weights[index];
    }
    out.push_back(posterior.thetas[index]);
  }
  return out;
}

void export_weighted_dataset(const std::vector<std::vector<double>>& thetas,
                             const std::vector<std::vector<std::vector<double>>>& summaries,
                             std::span<const double> weights, const std::string& path,
                             const std::string& metadata) {
  if (thetas.size() != summaries.size() || thetas.size() != weights.size()) {
    throw DomainError("export_weighted_dataset requires aligned inputs");
  }
  if (thetas.empty()) throw DomainError("export_weighted_dataset requires at least one record");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# " << metadata << "\n";
  const std::size_t p = thetas[0].size();
  const std::size_t x_dim = summaries[0].empty() ? 0 : summaries[0][0].size();
  for (std::size_t d = 0; d < p; ++d) out << "theta_" << d << ",";
  for (std::size_t d = 0; d < x_dim; ++d) out << "x_" << d << ",";
  out << "weight\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (const auto& x : summaries[i]) {
      for (double t : thetas[i]) out << fmt17(t) << ",";
      for (double v : x) out << fmt17(v) << ",";
      out << fmt17(weights[i]) << "\n";
    }
  }
  if (!out) throw IoError("failed writing: " + path);
}

std::vector<WeightedRecord> read_weighted_dataset(const std::string& path, std::size_t theta_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<WeightedRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string tok = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      values.push_back(std::strtod(tok.c_str(), nullptr));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (values.size() < theta_dim + 1) throw IoError("malformed record in " + path);
    WeightedRecord rec;
    rec.theta.assign(values.begin(), values.begin() + theta_dim);
    rec.x.assign(values.begin() + theta_dim, values.end() - 1);
    rec.weight = values.back();
    records.push_back(std::move(rec));
  }
  return records;
}

void write_posterior_csv(const std::string& path, const WeightedPosterior& posterior,
                         const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# " << metadata << "\n";
  const std::size_t p = posterior.size() == 0 ? 0 : posterior.thetas[0].size();
  for (std::size_t d = 0; d < p; ++d) out << "theta_" << d << ",";
  out << "weight\n";
  for (std::size_t i = 0; i < posterior.size(); ++i) {
    for (double t : posterior.thetas[i]) out << fmt17(t) << ",";
    out << fmt17(posterior.weights[i]) << "\n";
  }
  if (!out) throw IoError("failed writing: " + path);
}

WeightedPosterior read_posterior_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  WeightedPosterior posterior;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string tok = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      values.push_back(std::strtod(tok.c_str(), nullptr));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (values.size() < 2) throw IoError("malformed posterior row in " + path);
    posterior.weights.push_back(values.back());
    values.pop_back();
    posterior.thetas.push_back(std::move(values));
  }
  return posterior;
}

}  // namespace casbi
