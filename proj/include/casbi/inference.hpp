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

#ifndef CASBI_INFERENCE_HPP
#define CASBI_INFERENCE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "casbi/proposal.hpp"
#include "casbi/simulators.hpp"

namespace casbi {

/// Observed summary vector with the standardisation used by the ABC distance.
struct ObservedData {
  std::vector<double> summary;
  std::vector<double> location;  // per-dimension centre, from a pilot run
  std::vector<double> scale;     // per-dimension scale, from a pilot run
  std::optional<std::vector<double>> theta_true;

  double distance_to(std::span<const double> other) const;
};

/// Standardisation statistics (mean/std per summary dimension) from n_pilot
/// prior simulations. Zero-variance dimensions get scale 1.
ObservedData make_observed(const Simulator& sim, const PriorSpec& prior,
                           std::span<const double> theta_true, int m, std::size_t n_pilot,
                           std::uint64_t seed, int workers = 1);

/// How ABC proposes parameters: the prior itself, one cost-aware proposal, or
/// a multiple-importance-sampling plan.
struct PriorSampling {};
using SamplingSpec = std::variant<PriorSampling, CostAwareProposal, MISPlan>;

/// Weighted Dirac-mixture approximation of the ABC posterior.
struct WeightedPosterior {
  std::vector<std::vector<double>> thetas;
  std::vector<double> weights;  // normalised over accepted particles
  double epsilon = 0.0;
  double acceptance_rate = 0.0;
  double total_virtual_cost = 0.0;
  std::uint64_t n_proposed = 0;
  std::uint64_t n_accepted = 0;

  std::size_t size() const { return thetas.size(); }
};

/// Rejection ABC with a cost-aware (or plain) sampling distribution. The
/// budget counts proposed parameter draws, i.e. simulator calls; accepted
/// particles carry self-normalised cost-aware weights (uniform when sampling
/// from the prior); MIS strata are combined with coefficient 1/J over the
/// non-empty strata. Throws EmptyPosteriorError (reporting observed distance
/// quantiles) when nothing is accepted.
WeightedPosterior abc_rejection(const Simulator& sim, const SamplingSpec& sampling,
                                const PriorSpec& prior, const CostModel& cost,
                                const ObservedData& observed, double epsilon,
                                std::size_t n_budget, int m, std::uint64_t seed, int workers = 1);

/// Weighted mean, covariance, and marginal quantiles (left-continuous
/// weighted-ECDF inversion).
struct PosteriorStats {
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major p x p
  std::vector<double> quantile_levels;
  std::vector<std::vector<double>> quantiles;  // [dim][level]
};
PosteriorStats posterior_stats(const WeightedPosterior& posterior,
                               std::vector<double> quantile_levels = {0.05, 0.25, 0.5, 0.75,
                                                                      0.95});

/// Systematic resampling to an equally weighted particle set.
std::vector<std::vector<double>> resample(const WeightedPosterior& posterior, std::size_t size,
                                          std::uint64_t seed);

/// Writes line-delimited records theta_*,x_*,weight, one per (i, j) pair.
/// Weights repeat across the j index and sum to 1 over distinct i.
void export_weighted_dataset(const std::vector<std::vector<double>>& thetas,
                             const std::vector<std::vector<std::vector<double>>>& summaries,
                             std::span<const double> weights, const std::string& path,
                             const std::string& metadata);

struct WeightedRecord {
  std::vector<double> theta;
  std::vector<double> x;
  double weight = 0.0;
};
std::vector<WeightedRecord> read_weighted_dataset(const std::string& path, std::size_t theta_dim);

/// Posterior CSV: theta_0..theta_{p-1},weight with a metadata header line.
void write_posterior_csv(const std::string& path, const WeightedPosterior& posterior,
                         const std::string& metadata);
WeightedPosterior read_posterior_csv(const std::string& path);

}  // namespace casbi

#endif
