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

#ifndef CASBI_CONFIG_HPP
#define CASBI_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "casbi/cost_model.hpp"
#include "casbi/penalty.hpp"
#include "casbi/prior.hpp"
#include "casbi/proposal.hpp"
#include "casbi/simulators.hpp"

namespace casbi {

/// Parsed configuration value: number, bare/quoted string, [list], or
/// {key: value, ...} map.
struct ConfigValue {
  enum class Type { number, string, list, map };
  Type type = Type::number;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;
  std::map<std::string, ConfigValue> entries;

  double as_number(const std::string& field) const;
  std::string as_string(const std::string& field) const;
  std::vector<double> as_numbers(const std::string& field) const;
  const ConfigValue* find(const std::string& key) const;
};

using Config = std::map<std::string, ConfigValue>;

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
Config parse_config_string(const std::string& text);
Config parse_config_file(const std::string& path);

/// Canonical serialisation of a config (sorted keys) and its FNV-1a hash,
/// used for the metadata line of every output file.
std::string canonical_config(const Config& config);
std::uint64_t fnv1a_hash(const std::string& text);

/// How the experiment obtains its cost model.
struct CostSource {
  enum class Kind { preset, analytic, fit, file };
  Kind kind = Kind::preset;
  std::string preset_name = "gamma-cost-table";
  std::string path;                       // kind == file
  CostModel analytic = CostModel::preset("gamma-cost-table");  // kind == analytic
  // kind == fit:
  std::size_t pilot_n = 200;
  std::string model = "linear";  // linear | polynomial | gp
  int degree = 2;
  Clock clock = Clock::virtual_units;
};

/// Fully resolved experiment description.
struct ExperimentConfig {
  std::string simulator_name = "gamma";
  std::map<std::string, double> simulator_options;
  int m = 0;  // draws per simulate call; 0 means the simulator default
  PriorSpec prior = PriorSpec::box_uniform1(100.0, 1000.0);
  CostSource cost;
  std::optional<PenaltySpec> penalty;     // single-penalty runs
  std::optional<std::vector<double>> mis_ks;  // multiple importance sampling
  bool penalty_auto = false;              // run select_penalties first

  double epsilon = 0.05;
  std::size_t abc_budget = 50'000;
  std::size_t pilot_n = 500;  // standardisation pilot
  std::vector<double> theta_true;
  std::optional<std::vector<double>> observed_summary;  // overrides synthetic generation
  std::size_t export_reps = 1;

  std::vector<double> diagnose_ks = {0.5, 1.0, 2.0, 3.0};
  std::size_t diagnose_n_mc = 100'000;
  double diagnose_threshold = 0.95;

  std::size_t sample_n = 20'000;
  bool sample_simulate = false;
  std::size_t export_n = 1'000;

  std::string metrics_reference;

  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "out";

  Config raw;  // merged configuration the experiment was built from

  std::string metadata() const;  // "casbi=<ver> seed=<s> config=<hash>"
  Simulator make_sim() const { return make_simulator(simulator_name, simulator_options); }
  int effective_m(const Simulator& sim) const { return m > 0 ? m : sim.default_m(); }
};

/// Named experiment presets pinning each built-in study's constants:
/// gamma, sir-homogeneous, sir-temporal, sir-bernoulli, radio, gaussian-toy.
Config preset_config(const std::string& name);

/// Builds the resolved experiment from a parsed config: `preset` is expanded
/// first, explicit keys override it. Throws ConfigError with the offending
/// field name.
ExperimentConfig build_experiment(const Config& user);

}  // namespace casbi

#endif
