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

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "casbi/config.hpp"
#include "casbi/diagnostics.hpp"
#include "casbi/errors.hpp"
#include "casbi/inference.hpp"
#include "casbi/math.hpp"
#include "casbi/metrics.hpp"
#include "casbi/oracle.hpp"
#include "casbi/proposal.hpp"

namespace {

namespace fs = std::filesystem;
using namespace casbi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CommonFlags {
  std::string config_path;
  std::int64_t seed = -1;
  int workers = 0;
  std::string out;

  ExperimentConfig load() const {
    Config raw = config_path.empty() ? Config{} : parse_config_file(config_path);
    if (seed >= 0) {
      ConfigValue v;
      v.type = ConfigValue::Type::number;
      v.number = static_cast<double>(seed);
      raw["seed"] = v;
    }
    if (workers > 0) {
      ConfigValue v;
      v.type = ConfigValue::Type::number;
      v.number = workers;
      raw["workers"] = v;
    }
    if (!out.empty()) {
      ConfigValue v;
      v.type = ConfigValue::Type::string;
      v.text = out;
      raw["out"] = v;
    }
    return build_experiment(raw);
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* opt = cmd->add_option("config", flags.config_path, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", flags.seed, "override the experiment seed");
  cmd->add_option("--workers", flags.workers, "override the worker count");
  cmd->add_option("--out", flags.out, "override the output directory");
}

fs::path ensure_out(const ExperimentConfig& exp) {
  fs::path dir(exp.out_dir);
  fs::create_directories(dir);
  return dir;
}

// Resolves the experiment's cost model, running the pilot fit when asked.
// The pilot observations are returned through `obs_out` when non-null.
CostModel resolve_cost(const ExperimentConfig& exp, const Simulator& sim,
                       std::vector<CostObservation>* obs_out = nullptr,
                       MeasureReport* report_out = nullptr) {
  switch (exp.cost.kind) {
    case CostSource::Kind::preset:
      return CostModel::preset(exp.cost.preset_name);
    case CostSource::Kind::analytic:
      return exp.cost.analytic;
    case CostSource::Kind::file: {
      std::ifstream in(exp.cost.path);
      if (!in) throw ConfigError("cannot open cost model file: " + exp.cost.path);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      return CostModel::from_text(buffer.str());
    }
    case CostSource::Kind::fit:
      break;
  }
  std::vector<std::vector<double>> thetas(exp.cost.pilot_n);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    RngStream rng(derive_key(exp.seed, stream_tag::measure, i));
    thetas[i] = exp.prior.sample(rng);
  }
  MeasureReport local_report;
  MeasureReport* report = report_out != nullptr ? report_out : &local_report;
  std::vector<CostObservation> obs =
      measure_cost(sim, thetas, 1, exp.cost.clock, exp.seed, exp.workers, report);
  CostModel model = [&] {
    if (exp.cost.model == "linear") return fit_linear(obs, exp.cost.clock);
    if (exp.cost.model == "polynomial") return fit_polynomial(obs, exp.cost.degree, exp.cost.clock);
    return fit_gp(obs, GpFitConfig{}, exp.seed, exp.cost.clock);
  }();
  model.fit_seed = exp.seed;
  if (obs_out != nullptr) *obs_out = std::move(obs);
  return model;
}

ObservedData resolve_observed(const ExperimentConfig& exp, const Simulator& sim) {
  ObservedData observed = make_observed(sim, exp.prior, exp.theta_true, exp.effective_m(sim),
                                        exp.pilot_n, exp.seed, exp.workers);
  if (exp.observed_summary.has_value()) {
    if (exp.observed_summary->size() != sim.summary_dim()) {
      throw ConfigError("observed.summary dimension does not match the simulator");
    }
    observed.summary = *exp.observed_summary;
    observed.theta_true.reset();
  }
  return observed;
}

int cmd_cost_fit(const CommonFlags& flags) {
  const ExperimentConfig exp = flags.load();
  if (exp.cost.kind != CostSource::Kind::fit) {
    throw ConfigError("cost-fit requires cost = {source: fit, ...}");
  }
  const Simulator sim = exp.make_sim();
  const fs::path out = ensure_out(exp);

  std::vector<CostObservation> obs;
  MeasureReport report;
  const CostModel model = resolve_cost(exp, sim, &obs, &report);

  write_observations_csv((out / "cost_obs.csv").string(), obs, exp.metadata());
  std::ofstream model_file(out / "cost_model.txt");
  model_file << "# " << exp.metadata() << "\n" << model.to_text();

  std::ofstream fit_report(out / "cost_fit_report.txt");
  fit_report << "# " << exp.metadata() << "\n";
  fit_report << "model " << exp.cost.model << "\n";
  fit_report << "pilot_n " << exp.cost.pilot_n << "\n";
  fit_report << "rmse_train " << fmt(model.fit_rmse_train) << "\n";
  if (obs.size() >= 5) {
    const double rmse = holdout_rmse(obs, exp.cost.clock, exp.seed,
                                     [&](std::span<const CostObservation> subset) {
                                       if (exp.cost.model == "linear") {
                                         return fit_linear(subset, exp.cost.clock);
                                       }
                                       if (exp.cost.model == "polynomial") {
                                         return fit_polynomial(subset, exp.cost.degree,
                                                               exp.cost.clock);
                                       }
                                       return fit_gp(subset, GpFitConfig{}, exp.seed,
                                                     exp.cost.clock);
                                     });
    fit_report << "rmse_holdout " << fmt(rmse) << "\n";
  }
  for (std::size_t i = 0; i < report.failed_indices.size(); ++i) {
    fit_report << "failed_theta_index " << report.failed_indices[i] << " "
               << report.failure_messages[i] << "\n";
  }
  std::cout << "cost model written to " << (out / "cost_model.txt").string() << "\n";
  return 0;
}

int cmd_diagnose(const CommonFlags& flags) {
  const ExperimentConfig exp = flags.load();
  const Simulator sim = exp.make_sim();
  const fs::path out = ensure_out(exp);
  const CostModel cost = resolve_cost(exp, sim);

  const SelectionResult selection =
      select_penalties(exp.diagnose_ks, exp.prior, cost, exp.diagnose_n_mc,
                       exp.diagnose_threshold, exp.seed, exp.workers);

  std::ofstream csv(out / "diagnostics.csv");
  csv << "# " << exp.metadata() << "\n";
  csv << "quantity";
  for (const auto& c : selection.candidates) csv << ",k=" << c.k;
  csv << "\n";
  const auto row = [&](const char* name, auto getter) {
    csv << name;
    for (const auto& c : selection.candidates) csv << "," << fmt(getter(c));
    csv << "\n";
  };
  row("ess", [](const PenaltyCandidateReport& c) { return c.report.ess; });
  row("cg", [](const PenaltyCandidateReport& c) { return c.report.cg; });
  row("cg_x_ess", [](const PenaltyCandidateReport& c) { return c.report.product; });
  row("g_min", [](const PenaltyCandidateReport& c) { return c.report.g_min; });
  row("g_max", [](const PenaltyCandidateReport& c) { return c.report.g_max; });
  row("selected",
      [](const PenaltyCandidateReport& c) { return c.selected ? 1.0 : 0.0; });

  std::cout << "quantity";
  for (const auto& c : selection.candidates) std::cout << "\tk=" << c.k;
  std::cout << "\n";
  const auto print_row = [&](const char* name, auto getter) {
    std::cout << name;
    for (const auto& c : selection.candidates) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4g", getter(c));
      std::cout << "\t" << buf;
    }
    std::cout << "\n";
  };
  print_row("ess", [](const PenaltyCandidateReport& c) { return c.report.ess; });
  print_row("cg", [](const PenaltyCandidateReport& c) { return c.report.cg; });
  print_row("cg_x_ess", [](const PenaltyCandidateReport& c) { return c.report.product; });
  if (selection.none_passed) {
    std::cout << "warning: no candidate reached the threshold; constant-only plan recommended\n";
  } else {
    std::cout << "recommended mis ks:";
    for (const auto& c : selection.recommended.components) {
      std::cout << " " << c.penalty.power_exponent();
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_sample(const CommonFlags& flags) {
  const ExperimentConfig exp = flags.load();
  const Simulator sim = exp.make_sim();
  const fs::path out = ensure_out(exp);
  const CostModel cost = resolve_cost(exp, sim);
  const PenaltySpec penalty = exp.penalty.value_or(PenaltySpec::power(1.0));

  const CostAwareProposal proposal = CostAwareProposal::make(exp.prior, cost, penalty);
  const WeightedSamples samples =
      rejection_sample(proposal, exp.sample_n, exp.seed, exp.workers);
  write_weighted_samples_csv((out / "samples.csv").string(), samples, exp.metadata());

  const PenaltyBounds& bounds = proposal.bounds;
  const CgEstimate cg =
      estimate_cg(exp.prior, cost, penalty, bounds, std::max<std::size_t>(exp.sample_n, 10'000),
                  exp.seed, exp.workers);

  std::ofstream report(out / "cost_report.csv");
  report << "# " << exp.metadata() << "\n";
  report << "quantity,value\n";
  report << "predicted_cg," << fmt(cg.value) << "\n";
  report << "predicted_cg_se," << fmt(cg.std_error) << "\n";
  report << "predicted_time_saved_percent," << fmt(100.0 * (1.0 - 1.0 / cg.value)) << "\n";

  if (exp.sample_simulate) {
    const int m = exp.effective_m(sim);
    std::vector<double> vc_ca(exp.sample_n), vc_prior(exp.sample_n);
    parallel_for(exp.sample_n, exp.workers, [&](std::size_t i) {
      vc_ca[i] = sim.simulate(samples.thetas[i], m, StreamKey{exp.seed, (std::uint64_t{1} << 48) | i})
                     .virtual_cost;
    });
    std::vector<std::vector<double>> prior_thetas(exp.sample_n);
    parallel_for(exp.sample_n, exp.workers, [&](std::size_t i) {
      RngStream rng(derive_key(exp.seed, stream_tag::rejection, std::uint64_t{999}, i));
      prior_thetas[i] = exp.prior.sample(rng);
      vc_prior[i] =
          sim.simulate(prior_thetas[i], m, StreamKey{exp.seed, (std::uint64_t{2} << 48) | i})
              .virtual_cost;
    });
    const double total_ca = pairwise_sum(vc_ca);
    const double total_prior = pairwise_sum(vc_prior);
    report << "realised_virtual_cost_prior," << fmt(total_prior) << "\n";
    report << "realised_virtual_cost_ca," << fmt(total_ca) << "\n";
    report << "realised_cost_ratio," << fmt(total_prior / total_ca) << "\n";
    report << "realised_time_saved_percent," << fmt(100.0 * (1.0 - total_ca / total_prior))
           << "\n";
  }
  std::cout << "samples written to " << (out / "samples.csv").string() << "\n";
  return 0;
}

int cmd_abc(const CommonFlags& flags, double epsilon_override, double budget_override,
            double penalty_k_override, bool use_mis) {
  ExperimentConfig exp = flags.load();
  if (epsilon_override > 0.0) exp.epsilon = epsilon_override;
  if (budget_override > 0.0) exp.abc_budget = static_cast<std::size_t>(budget_override);
  if (penalty_k_override >= 0.0) {
    exp.penalty = PenaltySpec::power(penalty_k_override);
    exp.penalty_auto = false;
  }

  const Simulator sim = exp.make_sim();
  const fs::path out = ensure_out(exp);
  const CostModel cost = resolve_cost(exp, sim);
  const ObservedData observed = resolve_observed(exp, sim);

  SamplingSpec sampling = PriorSampling{};
  if (use_mis || exp.mis_ks.has_value()) {
    const std::vector<double> ks = exp.mis_ks.value_or(std::vector<double>{0.0, 1.0, 2.0, 3.0});
    sampling = MISPlan::equal_powers(ks, exp.abc_budget);
  } else if (exp.penalty_auto) {
    const SelectionResult selection =
        select_penalties(exp.diagnose_ks, exp.prior, cost, exp.diagnose_n_mc,
                         exp.diagnose_threshold, exp.seed, exp.workers);
    sampling = selection.recommended;
  } else if (exp.penalty.has_value() && !exp.penalty->is_constant()) {
    sampling = CostAwareProposal::make(exp.prior, cost, *exp.penalty);
  }

  const WeightedPosterior posterior =
      abc_rejection(sim, sampling, exp.prior, cost, observed, exp.epsilon, exp.abc_budget,
                    exp.effective_m(sim), exp.seed, exp.workers);
  write_posterior_csv((out / "posterior.csv").string(), posterior, exp.metadata());

  const PosteriorStats stats = posterior_stats(posterior);
  std::ofstream stats_file(out / "posterior_stats.csv");
  stats_file << "# " << exp.metadata() << "\n";
  stats_file << "quantity,dim,value\n";
  for (std::size_t d = 0; d < stats.mean.size(); ++d) {
    stats_file << "mean," << d << "," << fmt(stats.mean[d]) << "\n";
  }
  for (std::size_t d = 0; d < stats.mean.size(); ++d) {
    for (std::size_t q = 0; q < stats.quantile_levels.size(); ++q) {
      stats_file << "q" << fmt(stats.quantile_levels[q]) << "," << d << ","
                 << fmt(stats.quantiles[d][q]) << "\n";
    }
  }
  stats_file << "acceptance_rate,0," << fmt(posterior.acceptance_rate) << "\n";
  stats_file << "total_virtual_cost,0," << fmt(posterior.total_virtual_cost) << "\n";

  if (!exp.metrics_reference.empty()) {
    const WeightedPosterior reference = read_posterior_csv(exp.metrics_reference);
    const double lengthscale = median_heuristic(reference.thetas);
    const double mmd = mmd2(posterior.thetas, reference.thetas, KernelConfig{lengthscale},
                            posterior.weights, reference.weights, false, exp.workers);
    const std::vector<double> ks = ks_marginals(posterior.thetas, reference.thetas);
    std::ofstream metrics_file(out / "metrics.csv");
    metrics_file << "# " << exp.metadata() << "\n";
    metrics_file << "metric,dim,value\n";
    metrics_file << "mmd2,0," << fmt(mmd) << "\n";
    for (std::size_t d = 0; d < ks.size(); ++d) {
      metrics_file << "ks," << d << "," << fmt(ks[d]) << "\n";
    }
  }

  std::cout << "accepted " << posterior.n_accepted << " of " << posterior.n_proposed
            << " proposals; posterior written to " << (out / "posterior.csv").string() << "\n";
  return 0;
}

int cmd_export(const CommonFlags& flags) {
  const ExperimentConfig exp = flags.load();
  const Simulator sim = exp.make_sim();
  const fs::path out = ensure_out(exp);
  const CostModel cost = resolve_cost(exp, sim);

  std::vector<std::vector<double>> thetas;
  std::vector<double> weights;
  if (exp.penalty.has_value() && !exp.penalty->is_constant()) {
    const CostAwareProposal proposal = CostAwareProposal::make(exp.prior, cost, *exp.penalty);
    WeightedSamples samples = rejection_sample(proposal, exp.export_n, exp.seed, exp.workers);
    thetas = std::move(samples.thetas);
    weights = std::move(samples.weights);
  } else {
    thetas.resize(exp.export_n);
    for (std::size_t i = 0; i < exp.export_n; ++i) {
      RngStream rng(derive_key(exp.seed, stream_tag::rejection, std::uint64_t{0}, i));
      thetas[i] = exp.prior.sample(rng);
    }
    weights.assign(exp.export_n, 1.0 / static_cast<double>(exp.export_n));
  }

  const int m = exp.effective_m(sim);
  std::vector<std::vector<std::vector<double>>> summaries(thetas.size());
  parallel_for(thetas.size(), exp.workers, [&](std::size_t i) {
    summaries[i].resize(exp.export_reps);
    for (std::size_t j = 0; j < exp.export_reps; ++j) {
      const std::uint64_t id = (std::uint64_t{3} << 48) | (i * exp.export_reps + j);
      summaries[i][j] = sim.simulate(thetas[i], m, StreamKey{exp.seed, id}).summary;
    }
  });
  export_weighted_dataset(thetas, summaries, weights, (out / "weighted_dataset.csv").string(),
                          exp.metadata());
  std::cout << "dataset written to " << (out / "weighted_dataset.csv").string() << "\n";
  return 0;
}

int cmd_oracle(double theta_min, double theta_max, double alpha, double beta,
               const std::string& cost_kind) {
  ClosedFormCase base;
  base.theta_min = theta_min;
  base.theta_max = theta_max;
  base.alpha = alpha;
  base.beta = beta;
  base.cost_kind = cost_kind == "quadratic" ? ClosedFormCase::CostKind::quadratic
                                            : ClosedFormCase::CostKind::linear;
  std::cout << "k,B,B_closed_form,CG,CG_closed_form\n";
  for (double k : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    ClosedFormCase c = base;
    c.k = k;
    const OracleValue b = closed_form_B(c);
    const OracleValue cg = closed_form_CG(c);
    std::cout << k << "," << fmt(b.value) << "," << (b.closed_form ? 1 : 0) << ","
              << fmt(cg.value) << "," << (cg.closed_form ? 1 : 0) << "\n";
  }
  return 0;
}

int cmd_metrics(const std::string& path_a, const std::string& path_b, double lengthscale,
                int workers) {
  const WeightedPosterior a = read_posterior_csv(path_a);
  const WeightedPosterior b = read_posterior_csv(path_b);
  const double l = lengthscale > 0.0 ? lengthscale : median_heuristic(b.thetas);
  const double mmd =
      mmd2(a.thetas, b.thetas, KernelConfig{l}, a.weights, b.weights, false, workers);
  const std::vector<double> ks = ks_marginals(a.thetas, b.thetas);
  std::cout << "metric,dim,value\n";
  std::cout << "lengthscale,0," << fmt(l) << "\n";
  std::cout << "mmd2,0," << fmt(mmd) << "\n";
  for (std::size_t d = 0; d < ks.size(); ++d) std::cout << "ks," << d << "," << fmt(ks[d]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-aware sampling and simulation-based inference toolkit"};
  app.require_subcommand(1);

  CommonFlags fit_flags, diag_flags, sample_flags, abc_flags, export_flags;

  auto* fit_cmd = app.add_subcommand("cost-fit", "measure simulation cost and fit a cost model");
  add_common(fit_cmd, fit_flags);

  auto* diag_cmd =
      app.add_subcommand("diagnose", "ESS / CG / CGxESS table over candidate penalties");
  add_common(diag_cmd, diag_flags);

  auto* sample_cmd =
      app.add_subcommand("sample", "draw weighted samples from the cost-aware proposal");
  add_common(sample_cmd, sample_flags);

  auto* abc_cmd = app.add_subcommand("abc", "cost-aware rejection ABC");
  add_common(abc_cmd, abc_flags);
  double epsilon_override = -1.0, budget_override = -1.0, penalty_k_override = -1.0;
  bool use_mis = false;
  abc_cmd->add_option("--epsilon", epsilon_override, "ABC tolerance on the standardised scale");
  abc_cmd->add_option("--budget", budget_override, "simulation budget (proposed draws)");
  abc_cmd->add_option("--penalty-k", penalty_k_override, "power penalty exponent");
  abc_cmd->add_flag("--mis", use_mis, "use the multiple importance sampling plan");

  auto* export_cmd =
      app.add_subcommand("export", "export a weighted (theta, x, weight) dataset");
  add_common(export_cmd, export_flags);

  auto* oracle_cmd = app.add_subcommand("oracle", "print closed-form B and CG tables");
  double theta_min = 100.0, theta_max = 1000.0, alpha = 1.0, beta = 0.0;
  std::string cost_kind = "linear";
  oracle_cmd->add_option("--theta-min", theta_min, "support lower end");
  oracle_cmd->add_option("--theta-max", theta_max, "support upper end");
  oracle_cmd->add_option("--alpha", alpha, "cost slope / curvature");
  oracle_cmd->add_option("--beta", beta, "linear-cost intercept");
  oracle_cmd->add_option("--cost", cost_kind, "linear or quadratic");

  auto* metrics_cmd = app.add_subcommand("metrics", "mmd2 and marginal KS between two particle CSVs");
  std::string metrics_a, metrics_b;
  double metrics_lengthscale = -1.0;
  int metrics_workers = 1;
  metrics_cmd->add_option("first", metrics_a, "first particle CSV")->required();
  metrics_cmd->add_option("second", metrics_b, "second (reference) particle CSV")->required();
  metrics_cmd->add_option("--lengthscale", metrics_lengthscale,
                          "kernel lengthscale (default: median heuristic on the reference)");
  metrics_cmd->add_option("--workers", metrics_workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return cmd_cost_fit(fit_flags);
    if (diag_cmd->parsed()) return cmd_diagnose(diag_flags);
    if (sample_cmd->parsed()) return cmd_sample(sample_flags);
    if (abc_cmd->parsed()) {
      return cmd_abc(abc_flags, epsilon_override, budget_override, penalty_k_override, use_mis);
    }
    if (export_cmd->parsed()) return cmd_export(export_flags);
    if (oracle_cmd->parsed()) return cmd_oracle(theta_min, theta_max, alpha, beta, cost_kind);
    if (metrics_cmd->parsed()) {
      return cmd_metrics(metrics_a, metrics_b, metrics_lengthscale, metrics_workers);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const EmptyPosteriorError& e) {
    std::cerr << "empty posterior: " << e.what() << "\n";
    return 3;
  } catch (const BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
