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

#include "casbi/cost_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "casbi/errors.hpp"
#include "casbi/math.hpp"
#include "casbi/metrics.hpp"
#include "casbi/rng.hpp"
#include "casbi/simulators.hpp"

namespace casbi {

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_floor(double floor) {
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw DomainError("cost model floor must be positive and finite");
  }
}

// All monomial power vectors over `dim` variables with total degree <= degree,
// in a fixed deterministic order starting from the intercept.
std::vector<std::vector<int>> monomial_powers(std::size_t dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(dim, 0);
  const std::function<void(std::size_t, int)> rec = [&](std::size_t d, int remaining) {
    if (d == dim) {
      out.push_back(current);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      current[d] = k;
      rec(d + 1, remaining - k);
      current[d] = 0;
    }
  };
  rec(0, degree);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int ta = std::accumulate(a.begin(), a.end(), 0);
    const int tb = std::accumulate(b.begin(), b.end(), 0);
    return ta != tb ? ta < tb : a < b;
  });
  return out;
}

std::string feature_name(const std::vector<int>& powers) {
  std::string name;
  for (std::size_t d = 0; d < powers.size(); ++d) {
    if (powers[d] == 0) continue;
    if (!name.empty()) name += "*";
    name += "theta_" + std::to_string(d);
    if (powers[d] > 1) name += "^" + std::to_string(powers[d]);
  }
  return name.empty() ? "1" : name;
}

double monomial_eval(const std::vector<int>& powers, std::span<const double> theta) {
  double v = 1.0;
  for (std::size_t d = 0; d < powers.size(); ++d) {
    for (int k = 0; k < powers[d]; ++k) v *= theta[d];
  }
  return v;
}

std::vector<const CostObservation*> usable(std::span<const CostObservation> obs) {
  std::vector<const CostObservation*> out;
  for (const auto& o : obs) {
    if (o.ok) out.push_back(&o);
  }
  return out;
}

double sq_exp_kernel(const std::vector<double>& a, const std::vector<double>& b, double amplitude,
                     const std::vector<double>& lengthscales) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double z = (a[d] - b[d]) / lengthscales[d];
    s += z * z;
  }
  return amplitude * std::exp(-0.5 * s);
}

// Deterministic Nelder-Mead minimisation with fixed iteration budget.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double step, int iters) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  for (int it = 0; it < iters; ++it) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);
    }
    const auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) {
        p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
      }
      return p;
    };

    const auto reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const auto expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const auto contracted = blend(0.5);
      const double fc = f(contracted);
      if (fc < values[worst]) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) {
            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[best][d]);
          }
          values[i] = f(simplex[i]);
        }
      }
    }
  }
  const std::size_t best =
      std::min_element(values.begin(), values.end()) - values.begin();
  return simplex[best];
}

}  // namespace

CostModel CostModel::analytic_linear(std::vector<double> slopes, double intercept, double floor) {
  check_floor(floor);
  if (slopes.empty()) throw DomainError("analytic_linear requires at least one slope");
  CostModel m;
  m.kind_ = Kind::analytic_linear;
  m.dim_ = slopes.size();
  m.slopes_ = std::move(slopes);
  m.intercept_ = intercept;
  m.floor_ = floor;
  return m;
}

CostModel CostModel::analytic_quadratic(std::vector<double> coeffs, double floor) {
  check_floor(floor);
  if (coeffs.empty()) throw DomainError("analytic_quadratic requires at least one coefficient");
  CostModel m;
  m.kind_ = Kind::analytic_quadratic;
  m.dim_ = coeffs.size();
  m.slopes_ = std::move(coeffs);
  m.floor_ = floor;
  return m;
}

CostModel CostModel::preset(const std::string& name) {
  // Two Gamma-simulator presets: the prose-derived pure linear cost
  // (0.002 s at theta=100, tenfold at theta=1000) and the bound-table-derived
  // affine cost (1e-3 at 100, 2.8e-3 at 1000).
  if (name == "gamma-cost-text") return analytic_linear({2e-5}, 0.0);
  if (name == "gamma-cost-table") return analytic_linear({2e-6}, 8e-4);
  if (name == "gaussian-toy") return analytic_linear({1.0}, 6.0);
  throw ConfigError("unknown cost preset: " + name);
}

double CostModel::eval_raw(std::span<const double> theta) const {
  if (theta.size() != dim_) throw DomainError("cost model evaluated with mismatched dimension");
  switch (kind_) {
    case Kind::analytic_linear: {
      double c = intercept_;
      for (std::size_t d = 0; d < dim_; ++d) c += slopes_[d] * theta[d];
      return c;
    }
    case Kind::analytic_quadratic: {
      double c = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) c += slopes_[d] * theta[d] * theta[d];
      return c;
    }
    case Kind::fitted_linear:
    case Kind::fitted_polynomial: {
      double c = 0.0;
      for (std::size_t f = 0; f < coefficients_.size(); ++f) {
        c += coefficients_[f] * monomial_eval(feature_powers_[f], theta);
      }
      return c;
    }
    case Kind::fitted_gp: {
      const GpData& gp = *gp_;
      double c = 0.0;
      std::vector<double> point(theta.begin(), theta.end());
      for (std::size_t i = 0; i < gp.inputs.size(); ++i) {
        c += gp.alpha[i] * sq_exp_kernel(point, gp.inputs[i], gp.amplitude, gp.lengthscales);
      }
      return c;
    }
  }
  return floor_;
}

double CostModel::eval(std::span<const double> theta) const {
  const double raw = eval_raw(theta);
  if (!std::isfinite(raw)) throw InvalidCostError("cost model evaluated non-finite");
  return std::max(raw, floor_);
}

bool CostModel::is_fitted() const {
  return kind_ == Kind::fitted_linear || kind_ == Kind::fitted_polynomial ||
         kind_ == Kind::fitted_gp;
}

bool CostModel::monotone_per_coordinate(const Box& support) const {
  const auto non_negative = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  };
  switch (kind_) {
    case Kind::analytic_linear:
      return non_negative(slopes_);
    case Kind::analytic_quadratic:
      return non_negative(slopes_) &&
             std::all_of(support.low.begin(), support.low.end(), [](double x) { return x >= 0.0; });
    case Kind::fitted_linear: {
      // Intercept first, slopes after; monotone when every slope is >= 0.
      for (std::size_t f = 0; f < coefficients_.size(); ++f) {
        const bool is_intercept =
            std::all_of(feature_powers_[f].begin(), feature_powers_[f].end(),
                        [](int p) { return p == 0; });
        if (!is_intercept && coefficients_[f] < 0.0) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

struct CostModelBuilder {
  static CostModel least_squares(std::span<const CostObservation> obs, int degree, Clock clock,
                                 double floor, CostModel::Kind kind);
  static CostModel gp(std::span<const CostObservation> obs, const GpFitConfig& config,
                      std::uint64_t seed, Clock clock, double floor);
};

CostModel CostModelBuilder::least_squares(std::span<const CostObservation> obs, int degree,
                                          Clock clock, double floor, CostModel::Kind kind) {
  check_floor(floor);
  const auto rows = usable(obs);
  if (rows.empty()) throw DomainError("fit requires at least one usable observation");
  const std::size_t dim = rows[0]->theta.size();
  const auto powers = monomial_powers(dim, degree);
  const std::size_t n_features = powers.size();
  if (rows.size() < n_features) {
    throw DomainError("fit requires at least " + std::to_string(n_features) +
                      " observations, got " + std::to_string(rows.size()));
  }

  Eigen::MatrixXd design(rows.size(), n_features);
  Eigen::VectorXd target(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]->theta.size() != dim) throw DomainError("observations have mixed dimensions");
    for (std::size_t f = 0; f < n_features; ++f) {
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          monomial_eval(powers[f], rows[i]->theta);
    }
    target(static_cast<Eigen::Index>(i)) = rows[i]->y(clock);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(n_features)) {
    // Name the features behind the deficient directions via the pivoting.
    const auto perm = qr.colsPermutation().indices();
    std::string names;
    for (Eigen::Index j = qr.rank(); j < static_cast<Eigen::Index>(n_features); ++j) {
      if (!names.empty()) names += ", ";
      names += feature_name(powers[static_cast<std::size_t>(perm[j])]);
    }
    throw DomainError("rank-deficient design; deficient directions: " + names);
  }
  const Eigen::VectorXd coef = qr.solve(target);

  CostModel m;
  m.kind_ = kind;
  m.dim_ = dim;
  m.floor_ = floor;
  m.degree_ = degree;
  m.feature_powers_ = powers;
  m.coefficients_.assign(coef.data(), coef.data() + coef.size());
  const Eigen::VectorXd residual = design * coef - target;
  m.fit_rmse_train = std::sqrt(residual.squaredNorm() / static_cast<double>(rows.size()));
  return m;
}

CostModel fit_linear(std::span<const CostObservation> obs, Clock clock, double floor) {
  return CostModelBuilder::least_squares(obs, 1, clock, floor, CostModel::Kind::fitted_linear);
}

CostModel fit_polynomial(std::span<const CostObservation> obs, int degree, Clock clock,
                         double floor) {
  if (degree < 1) throw DomainError("fit_polynomial requires degree >= 1");
  return CostModelBuilder::least_squares(obs, degree, clock, floor,
                                         CostModel::Kind::fitted_polynomial);
}

namespace {

struct GpProblem {
  std::vector<std::vector<double>> inputs;
  Eigen::VectorXd targets;
  std::size_t dim;
};

// Negative log marginal likelihood of the zero-mean SE-kernel GP at
// log-parameters [log l_1.., log amp, log noise]. Returns +inf when the
// Cholesky fails or the value is non-finite.
double gp_negative_lml(const GpProblem& problem, const std::vector<double>& log_params) {
  const std::size_t p = problem.dim;
  const std::size_t n = problem.inputs.size();
  std::vector<double> lengthscales(p);
  for (std::size_t d = 0; d < p; ++d) lengthscales[d] = std::exp(log_params[d]);
  const double amplitude = std::exp(log_params[p]);
  const double noise = std::exp(log_params[p + 1]);

  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = sq_exp_kernel(problem.inputs[i], problem.inputs[j], amplitude, lengthscales);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
    k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += noise + 1e-12 * amplitude;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd alpha = llt.solve(problem.targets);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < llt.matrixL().rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  const double nll = 0.5 * problem.targets.dot(alpha) + 0.5 * log_det +
                     0.5 * static_cast<double>(n) * std::log(2.0 * 3.14159265358979323846);
  return std::isfinite(nll) ? nll : std::numeric_limits<double>::infinity();
}

}  // namespace

CostModel fit_gp(std::span<const CostObservation> obs, const GpFitConfig& config,
                 std::uint64_t seed, Clock clock, double floor) {
  return CostModelBuilder::gp(obs, config, seed, clock, floor);
}

CostModel CostModelBuilder::gp(std::span<const CostObservation> obs, const GpFitConfig& config,
                               std::uint64_t seed, Clock clock, double floor) {
  check_floor(floor);
  const auto rows = usable(obs);
  if (rows.size() < 2) throw DomainError("fit_gp requires at least 2 usable observations");
  const std::size_t dim = rows[0]->theta.size();
  const std::size_t n = rows.size();

  GpProblem problem;
  problem.dim = dim;
  problem.inputs.reserve(n);
  problem.targets.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]->theta.size() != dim) throw DomainError("observations have mixed dimensions");
    problem.inputs.push_back(rows[i]->theta);
    problem.targets(static_cast<Eigen::Index>(i)) = rows[i]->y(clock);
  }

  std::vector<double> range(dim, 1.0);
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = problem.inputs[0][d];
    double hi = lo;
    for (const auto& x : problem.inputs) {
      lo = std::min(lo, x[d]);
      hi = std::max(hi, x[d]);
    }
    range[d] = std::max(hi - lo, 1e-12);
  }
  const double target_var =
      std::max(1e-18, [&] {
        std::vector<double> y(problem.targets.data(), problem.targets.data() + n);
        const MeanStd ms = mean_std(y);
        return ms.std * ms.std;
      }());
  const double noise_hi = config.noise_hi > 0.0 ? config.noise_hi : target_var;

  // Bounds in log space; the search clamps into them.
  std::vector<double> lo(dim + 2), hi(dim + 2);
  for (std::size_t d = 0; d < dim; ++d) {
    lo[d] = std::log(config.lengthscale_lo * range[d]);
    hi[d] = std::log(config.lengthscale_hi * range[d]);
  }
  lo[dim] = std::log(1e-6 * target_var);
  hi[dim] = std::log(1e3 * target_var);
  lo[dim + 1] = std::log(std::max(config.noise_lo, 1e-300));
  hi[dim + 1] = std::log(std::max(noise_hi, config.noise_lo * (1.0 + 1e-12)));

  const auto clamp_params = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };
  const auto objective = [&](const std::vector<double>& x) {
    return gp_negative_lml(problem, clamp_params(x));
  };

  RngStream rng(derive_key(seed, stream_tag::fit, std::uint64_t{0x67505f666974}));
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    std::vector<double> start(dim + 2);
    for (std::size_t i = 0; i < dim + 2; ++i) {
      start[i] = r == 0 ? 0.5 * (lo[i] + hi[i]) : rng.uniform(lo[i], hi[i]);
    }
    if (!std::isfinite(objective(start))) continue;
    const auto found = clamp_params(nelder_mead(objective, start, 0.5, config.nelder_mead_iters));
    const double value = objective(found);
    if (value < best_value) {
      best_value = value;
      best_params = found;
    }
  }

  CostModel::GpData gp;
  gp.inputs = problem.inputs;
  gp.targets.assign(problem.targets.data(), problem.targets.data() + n);
  gp.lengthscales.resize(dim);
  if (best_params.empty()) {
    // Marginal likelihood was non-finite everywhere: median-heuristic
    // lengthscale and data-variance amplitude.
    const double medial = median_heuristic(problem.inputs);
    for (std::size_t d = 0; d < dim; ++d) gp.lengthscales[d] = medial;
    gp.amplitude = target_var;
    gp.noise_variance = std::max(config.noise_lo, 1e-10 * target_var);
    gp.fallback = true;
  } else {
    for (std::size_t d = 0; d < dim; ++d) gp.lengthscales[d] = std::exp(best_params[d]);
    gp.amplitude = std::exp(best_params[dim]);
    gp.noise_variance = std::exp(best_params[dim + 1]);
    if (gp.noise_variance <= config.noise_lo * (1.0 + 1e-9)) {
      // Honour an exact zero-noise request (interpolation).
      gp.noise_variance = config.noise_lo;
    }
  }

  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = sq_exp_kernel(problem.inputs[i], problem.inputs[j], gp.amplitude,
                                     gp.lengthscales);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
    k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
        gp.noise_variance + 1e-12 * gp.amplitude;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  double jitter = 1e-12 * gp.amplitude;
  while (llt.info() != Eigen::Success && jitter < 1e-3 * gp.amplitude) {
    jitter *= 100.0;
    Eigen::MatrixXd kj = k + jitter * Eigen::MatrixXd::Identity(n, n);
    llt.compute(kj);
  }
  if (llt.info() != Eigen::Success) throw DomainError("GP kernel matrix is not positive definite");
  const Eigen::VectorXd alpha = llt.solve(problem.targets);
  gp.alpha.assign(alpha.data(), alpha.data() + n);

  CostModel m;
  m.kind_ = CostModel::Kind::fitted_gp;
  m.dim_ = dim;
  m.floor_ = floor;
  m.gp_ = std::move(gp);
  m.fit_seed = seed;
  Eigen::VectorXd fitted(n);
  for (std::size_t i = 0; i < n; ++i) {
    fitted(static_cast<Eigen::Index>(i)) = m.eval_raw(problem.inputs[i]);
  }
  m.fit_rmse_train = std::sqrt((fitted - problem.targets).squaredNorm() / static_cast<double>(n));
  return m;
}

std::vector<CostObservation> measure_cost(const Simulator& sim,
                                          const std::vector<std::vector<double>>& thetas, int reps,
                                          Clock clock, std::uint64_t seed, int workers,
                                          MeasureReport* report) {
  (void)clock;  // both clocks recorded; the caller's fit selects one
  if (reps < 1) throw DomainError("measure_cost requires reps >= 1");
  const std::size_t n = thetas.size();
  std::vector<CostObservation> obs(n);
  std::vector<std::vector<double>> summaries(n);
  std::vector<std::string> failures(n);

  parallel_for(n, workers, [&](std::size_t i) {
    CostObservation& o = obs[i];
    o.theta = thetas[i];
    std::vector<double> wall(reps), vc(reps);
    try {
      for (int r = 0; r < reps; ++r) {
        const std::uint64_t id =
            (stream_tag::measure << 56) | (static_cast<std::uint64_t>(i) * reps + r);
        const SimResult res = sim.simulate(thetas[i], sim.default_m(), StreamKey{seed, id});
        wall[r] = res.wall_seconds;
        vc[r] = res.virtual_cost;
        if (r == reps - 1) summaries[i] = res.summary;
      }
      o.y_seconds = pairwise_sum(wall) / reps;
      o.y_virtual = pairwise_sum(vc) / reps;
    } catch (const Error& e) {
      o.ok = false;
      failures[i] = e.what();
    }
  });

  if (report != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      if (obs[i].ok) {
        report->summaries.push_back(summaries[i]);
      } else {
        report->failed_indices.push_back(i);
        report->failure_messages.push_back(failures[i]);
      }
    }
  }
  return obs;
}

double holdout_rmse(std::span<const CostObservation> obs, Clock clock, std::uint64_t seed,
                    const std::function<CostModel(std::span<const CostObservation>)>& fit) {
  const auto rows = usable(obs);
  if (rows.size() < 5) throw DomainError("holdout_rmse requires at least 5 usable observations");
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  RngStream rng(derive_key(seed, stream_tag::fit, std::uint64_t{0x686f6c64}));
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  const std::size_t n_train = (order.size() * 4) / 5;
  std::vector<CostObservation> train, test;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).push_back(*rows[order[i]]);
  }
  const CostModel model = fit(train);
  std::vector<double> sq(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double d = model.eval(test[i].theta) - test[i].y(clock);
    sq[i] = d * d;
  }
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(test.size()));
}

namespace {

std::vector<double> parse_doubles(std::istringstream& in) {
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

std::string CostModel::to_text() const {
  std::ostringstream out;
  const char* kind_name = nullptr;
  switch (kind_) {
    case Kind::analytic_linear: kind_name = "analytic_linear"; break;
    case Kind::analytic_quadratic: kind_name = "analytic_quadratic"; break;
    case Kind::fitted_linear: kind_name = "fitted_linear"; break;
    case Kind::fitted_polynomial: kind_name = "fitted_polynomial"; break;
    case Kind::fitted_gp: kind_name = "fitted_gp"; break;
  }
  out << "kind " << kind_name << "\n";
  out << "dim " << dim_ << "\n";
  out << "floor " << format_g17(floor_) << "\n";
  out << "seed " << fit_seed << "\n";
  out << "rmse_train " << format_g17(fit_rmse_train) << "\n";
  if (kind_ == Kind::analytic_linear || kind_ == Kind::analytic_quadratic) {
    out << "slopes";
    for (double s : slopes_) out << " " << format_g17(s);
    out << "\nintercept " << format_g17(intercept_) << "\n";
  } else if (kind_ == Kind::fitted_linear || kind_ == Kind::fitted_polynomial) {
    out << "degree " << degree_ << "\n";
    out << "coefficients";
    for (double c : coefficients_) out << " " << format_g17(c);
    out << "\n";
    for (const auto& powers : feature_powers_) {
      out << "powers";
      for (int p : powers) out << " " << p;
      out << "\n";
    }
  } else {
    const GpData& gp = *gp_;
    out << "amplitude " << format_g17(gp.amplitude) << "\n";
    out << "noise " << format_g17(gp.noise_variance) << "\n";
    out << "fallback " << (gp.fallback ? 1 : 0) << "\n";
    out << "lengthscales";
    for (double l : gp.lengthscales) out << " " << format_g17(l);
    out << "\n";
    for (std::size_t i = 0; i < gp.inputs.size(); ++i) {
      out << "row";
      for (double x : gp.inputs[i]) out << " " << format_g17(x);
      out << " " << format_g17(gp.targets[i]) << " " << format_g17(gp.alpha[i]) << "\n";
    }
  }
  return out.str();
}

CostModel CostModel::from_text(const std::string& text) {
  CostModel m;
  std::istringstream in(text);
  std::string line;
  std::string kind_name;
  GpData gp;
  bool has_gp_rows = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "kind") {
      ls >> kind_name;
    } else if (key == "dim") {
      ls >> m.dim_;
    } else if (key == "floor") {
      ls >> m.floor_;
    } else if (key == "seed") {
      ls >> m.fit_seed;
    } else if (key == "rmse_train") {
      ls >> m.fit_rmse_train;
    } else if (key == "slopes") {
      m.slopes_ = parse_doubles(ls);
    } else if (key == "intercept") {
      ls >> m.intercept_;
    } else if (key == "degree") {
      ls >> m.degree_;
    } else if (key == "coefficients") {
      m.coefficients_ = parse_doubles(ls);
    } else if (key == "powers") {
      std::vector<int> powers;
      int p;
      while (ls >> p) powers.push_back(p);
      m.feature_powers_.push_back(std::move(powers));
    } else if (key == "amplitude") {
      ls >> gp.amplitude;
    } else if (key == "noise") {
      ls >> gp.noise_variance;
    } else if (key == "fallback") {
      int f;
      ls >> f;
      gp.fallback = f != 0;
    } else if (key == "lengthscales") {
      gp.lengthscales = parse_doubles(ls);
    } else if (key == "row") {
      const auto values = parse_doubles(ls);
      if (values.size() < 3) throw IoError("malformed GP row in cost model file");
      gp.inputs.emplace_back(values.begin(), values.end() - 2);
      gp.targets.push_back(values[values.size() - 2]);
      gp.alpha.push_back(values.back());
      has_gp_rows = true;
    } else {
      throw IoError("unknown cost model key: " + key);
    }
  }
  if (kind_name == "analytic_linear") {
    m.kind_ = Kind::analytic_linear;
  } else if (kind_name == "analytic_quadratic") {
    m.kind_ = Kind::analytic_quadratic;
  } else if (kind_name == "fitted_linear") {
    m.kind_ = Kind::fitted_linear;
  } else if (kind_name == "fitted_polynomial") {
    m.kind_ = Kind::fitted_polynomial;
  } else if (kind_name == "fitted_gp") {
    m.kind_ = Kind::fitted_gp;
  } else {
    throw IoError("cost model file has no valid kind tag");
  }
  if (has_gp_rows) m.gp_ = std::move(gp);
  check_floor(m.floor_);
  return m;
}

void write_observations_csv(const std::string& path, std::span<const CostObservation> obs,
                            const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# " << metadata << "\n";
  std::size_t dim = 0;
  for (const auto& o : obs) {
    if (o.ok) {
      dim = o.theta.size();
      break;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) out << "theta_" << d << ",";
  out << "y_seconds,y_virtual\n";
  for (const auto& o : obs) {
    if (!o.ok) continue;
    for (double t : o.theta) out << format_g17(t) << ",";
    out << format_g17(o.y_seconds) << "," << format_g17(o.y_virtual) << "\n";
  }
  if (!out) throw IoError("failed writing: " + path);
}

std::vector<CostObservation> read_observations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<CostObservation> obs;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names
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
    if (values.size() < 3) throw IoError("malformed observation row in " + path);
    CostObservation o;
    o.theta.assign(values.begin(), values.end() - 2);
    o.y_seconds = values[values.size() - 2];
    o.y_virtual = values.back();
    obs.push_back(std::move(o));
  }
  return obs;
}

}  // namespace casbi
