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

#ifndef CASBI_COST_MODEL_HPP
#define CASBI_COST_MODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casbi/box.hpp"

namespace casbi {

class Simulator;

enum class Clock { wall, virtual_units };

/// One timed simulator evaluation.
struct CostObservation {
  std::vector<double> theta;
  double y_seconds = 0.0;
  double y_virtual = 0.0;
  bool ok = true;

  double y(Clock clock) const { return clock == Clock::wall ? y_seconds : y_virtual; }
};

/// Hyperparameter search configuration for GP cost fits.
struct GpFitConfig {
  double lengthscale_lo = 1e-3;  // relative to per-dimension data range
  double lengthscale_hi = 1e+1;  // relative to per-dimension data range
  double noise_lo = 1e-12;       // absolute variance
  double noise_hi = -1.0;        // absolute variance; <0 means var(y)
  int restarts = 8;
  int nelder_mead_iters = 200;
};

/// Expected-cost function c(theta): analytic, or fitted from observations.
/// Evaluations are clamped at a strictly positive floor so the composed
/// penalty surface stays strictly positive.
class CostModel {
 public:
  enum class Kind {
    analytic_linear,
    analytic_quadratic,
    fitted_linear,
    fitted_polynomial,
    fitted_gp
  };

  /// c(theta) = sum_d slopes[d] * theta[d] + intercept.
  static CostModel analytic_linear(std::vector<double> slopes, double intercept,
                                   double floor = 1e-9);
  /// c(theta) = sum_d coeffs[d] * theta[d]^2.
  static CostModel analytic_quadratic(std::vector<double> coeffs, double floor = 1e-9);

  /// Named analytic presets ("gamma-cost-text", "gamma-cost-table", ...).
  static CostModel preset(const std::string& name);

  double eval(std::span<const double> theta) const;
  double eval_raw(std::span<const double> theta) const;
  double eval1(double theta) const { return eval(std::span<const double>(&theta, 1)); }

  Kind kind() const { return kind_; }
  double floor() const { return floor_; }
  std::size_t dim() const { return dim_; }
  bool is_fitted() const;
  /// True when the model is non-decreasing along every coordinate over the
  /// given support, in which case extrema sit at box corners.
  bool monotone_per_coordinate(const Box& support) const;

  /// Structured-text round trip (variant tag, coefficients, floor, metadata).
  std::string to_text() const;
  static CostModel from_text(const std::string& text);

  struct GpData {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    double amplitude = 1.0;
    std::vector<double> lengthscales;
    double noise_variance = 0.0;
    std::vector<double> alpha;  // K^{-1} y, precomputed at fit time
    bool fallback = false;      // median-heuristic fallback was used
  };
  const std::optional<GpData>& gp_data() const { return gp_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  // Fit metadata carried for serialisation / reports.
  std::uint64_t fit_seed = 0;
  double fit_rmse_train = 0.0;

 private:
  friend struct CostModelBuilder;  // internal construction by the fit routines

  CostModel() = default;
  Kind kind_ = Kind::analytic_linear;
  std::size_t dim_ = 1;
  double floor_ = 1e-9;
  std::vector<double> slopes_;  // analytic linear / quadratic coefficients
  double intercept_ = 0.0;
  // Fitted linear/polynomial: coefficients over monomial features.
  int degree_ = 1;
  std::vector<double> coefficients_;
  std::vector<std::vector<int>> feature_powers_;
  std::optional<GpData> gp_;
};

/// Runs the simulator at each theta `reps` times and records the mean
/// per-simulation cost under both clocks. Failed evaluations are excluded and
/// surfaced through the report. Simulated summaries are retained so pilot
/// runs can be reused downstream.
struct MeasureReport {
  std::vector<std::vector<double>> summaries;  // last rep of each successful theta
  std::vector<std::size_t> failed_indices;
  std::vector<std::string> failure_messages;
};
std::vector<CostObservation> measure_cost(const Simulator& sim,
                                          const std::vector<std::vector<double>>& thetas, int reps,
                                          Clock clock, std::uint64_t seed, int workers = 1,
                                          MeasureReport* report = nullptr);

/// Ordinary least squares on [1, theta]. Requires >= dim+1 distinct points.
CostModel fit_linear(std::span<const CostObservation> obs, Clock clock = Clock::virtual_units,
                     double floor = 1e-9);

/// Least squares over all monomials of total degree <= degree.
CostModel fit_polynomial(std::span<const CostObservation> obs, int degree,
                         Clock clock = Clock::virtual_units, double floor = 1e-9);

/// Zero-mean GP with squared-exponential kernel and per-dimension
/// lengthscales; hyperparameters maximise the log marginal likelihood with
/// seeded multi-start local search. Falls back to the median-heuristic
/// lengthscale and data-variance amplitude when the likelihood is non-finite.
CostModel fit_gp(std::span<const CostObservation> obs, const GpFitConfig& config = {},
                 std::uint64_t seed = 0, Clock clock = Clock::virtual_units, double floor = 1e-9);

/// RMSE on a seeded 80/20 holdout split: the model is fitted on the 80% side
/// and scored on the rest.
double holdout_rmse(std::span<const CostObservation> obs, Clock clock, std::uint64_t seed,
                    const std::function<CostModel(std::span<const CostObservation>)>& fit);

/// CSV round trip for observations, header:
/// theta_0,...,theta_{p-1},y_seconds,y_virtual
void write_observations_csv(const std::string& path, std::span<const CostObservation> obs,
                            const std::string& metadata);
std::vector<CostObservation> read_observations_csv(const std::string& path);

}  // namespace casbi

#endif
