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

#include "casbi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "casbi/errors.hpp"

namespace casbi {

double ConfigValue::as_number(const std::string& field) const {
  if (type != Type::number) throw ConfigError("field '" + field + "' must be a number");
  return number;
}

std::string ConfigValue::as_string(const std::string& field) const {
  if (type == Type::string) return text;
  if (type == Type::number) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", number);
    return buf;
  }
  throw ConfigError("field '" + field + "' must be a string");
}

std::vector<double> ConfigValue::as_numbers(const std::string& field) const {
  if (type == Type::number) return {number};
  if (type != Type::list) throw ConfigError("field '" + field + "' must be a number or list");
  std::vector<double> out;
  for (const auto& item : items) out.push_back(item.as_number(field));
  return out;
}

const ConfigValue* ConfigValue::find(const std::string& key) const {
  if (type != Type::map) return nullptr;
  const auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() const { return pos >= text.size(); }

  char peek() const { return text[pos]; }

  std::string token(const char* stop_chars) {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() && std::strchr(stop_chars, text[pos]) == nullptr &&
           !std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  ConfigValue parse_value() {
    skip_space();
    if (at_end()) throw ConfigError("config value expected");
    ConfigValue v;
    if (peek() == '{') {
      ++pos;
      v.type = ConfigValue::Type::map;
      skip_space();
      while (!at_end() && peek() != '}') {
        const std::string key = token(":");
        skip_space();
        if (at_end() || peek() != ':') throw ConfigError("expected ':' after key '" + key + "'");
        ++pos;
        v.entries[key] = parse_value();
        skip_space();
        if (!at_end() && peek() == ',') {
          ++pos;
          skip_space();
        }
      }
      if (at_end()) throw ConfigError("unterminated '{' in config value");
      ++pos;
      return v;
    }
    if (peek() == '[') {
      ++pos;
      v.type = ConfigValue::Type::list;
      skip_space();
      while (!at_end() && peek() != ']') {
        v.items.push_back(parse_value());
        skip_space();
        if (!at_end() && peek() == ',') {
          ++pos;
          skip_space();
        }
      }
      if (at_end()) throw ConfigError("unterminated '[' in config value");
      ++pos;
      return v;
    }
    if (peek() == '"') {
      ++pos;
      const std::size_t start = pos;
      while (!at_end() && peek() != '"') ++pos;
      if (at_end()) throw ConfigError("unterminated string in config value");
      v.type = ConfigValue::Type::string;
      v.text = text.substr(start, pos - start);
      ++pos;
      return v;
    }
    const std::string tok = token(",}]:");
    if (tok.empty()) throw ConfigError("empty config value");
    char* end = nullptr;
    const double num = std::strtod(tok.c_str(), &end);
    if (end != nullptr && *end == '\0') {
      v.type = ConfigValue::Type::number;
      v.number = num;
    } else {
      v.type = ConfigValue::Type::string;
      v.text = tok;
    }
    return v;
  }
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

void serialise_value(const ConfigValue& v, std::ostringstream& out) {
  switch (v.type) {
    case ConfigValue::Type::number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v.number);
      out << buf;
      break;
    }
    case ConfigValue::Type::string:
      out << '"' << v.text << '"';
      break;
    case ConfigValue::Type::list:
      out << '[';
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out << ',';
        serialise_value(v.items[i], out);
      }
      out << ']';
      break;
    case ConfigValue::Type::map:
      out << '{';
      bool first = true;
      for (const auto& [k, val] : v.entries) {
        if (!first) out << ',';
        first = false;
        out << k << ':';
        serialise_value(val, out);
      }
      out << '}';
      break;
  }
}

}  // namespace

Config parse_config_string(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  std::string pending;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = strip_comment(raw_line);
    // Allow multi-line values: keep accumulating until brackets balance.
    pending += line + " ";
    int depth = 0;
    bool in_string = false;
    for (char c : pending) {
      if (c == '"') in_string = !in_string;
      if (in_string) continue;
      if (c == '{' || c == '[') ++depth;
      if (c == '}' || c == ']') --depth;
    }
    if (depth > 0) continue;

    std::string stmt = pending;
    pending.clear();
    const std::size_t eq = stmt.find('=');
    if (stmt.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = stmt.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(),
                             [](unsigned char c) { return std::isspace(c); }),
              key.end());
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    const std::string value_text = stmt.substr(eq + 1);
    Parser parser{value_text};
    config[key] = parser.parse_value();
    parser.skip_space();
    if (!parser.at_end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": trailing characters after value");
    }
  }
  if (!pending.empty() && pending.find_first_not_of(" \t\r\n") != std::string::npos) {
    throw ConfigError("unterminated bracket at end of config");
  }
  return config;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str());
}

std::string canonical_config(const Config& config) {
  std::ostringstream out;
  for (const auto& [key, value] : config) {
    out << key << '=';
    serialise_value(value, out);
    out << ';';
  }
  return out.str();
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string ExperimentConfig::metadata() const {
  // Workers and output location never influence results, so they stay out of
  // the hash: identical experiments give identical metadata lines.
  Config hashed = raw;
  hashed.erase("workers");
  hashed.erase("out");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(canonical_config(hashed))));
  return std::string("casbi=") + CASBI_VERSION + " seed=" + std::to_string(seed) + " config=" +
         buf;
}

Config preset_config(const std::string& name) {
  const auto parse = [](const char* text) { return parse_config_string(text); };
  if (name == "gamma") {
    return parse(R"(
      simulator = gamma
      sim = {m: 500}
      prior = {type: box, low: 100, high: 1000}
      cost = {source: preset, name: gamma-cost-table}
      penalty = {type: power, k: 1}
      abc = {epsilon: 0.05, budget: 50000, pilot: 500}
      observed = {theta_true: 250}
      diagnose = {ks: [0.5, 1, 2, 3], n_mc: 100000, threshold: 0.95}
      sample = {n: 20000}
    )");
  }
  if (name == "sir-homogeneous") {
    return parse(R"(
      simulator = sir_homogeneous
      sim = {population: 10000, k_disp: 1}
      prior = {type: box, low: 1, high: 10}
      cost = {source: fit, pilot: 200, model: gp, clock: virtual}
      penalty = {type: power, k: 1}
      abc = {epsilon: 0.5, budget: 10000, pilot: 500}
      observed = {theta_true: 5}
      diagnose = {ks: [0.25, 0.5, 0.75, 1, 1.5, 2], n_mc: 100000, threshold: 0.95}
    )");
  }
  if (name == "sir-temporal") {
    return parse(R"(
      simulator = sir_temporal
      sim = {population: 1000, n_bins: 10}
      prior = {type: box, low: [0.1, 0.1], high: [1.0, 1.0]}
      cost = {source: fit, pilot: 200, model: gp, clock: virtual}
      penalty = {type: power, k: 1}
      abc = {epsilon: 0.5, budget: 10000, pilot: 500}
      observed = {theta_true: [0.5, 0.5]}
      diagnose = {ks: [0.25, 0.5, 0.75, 1, 1.5, 2], n_mc: 100000, threshold: 0.95}
    )");
  }
  if (name == "sir-bernoulli") {
    return parse(R"(
      simulator = sir_bernoulli
      sim = {population: 1000, n_bins: 10}
      prior = {type: box, low: [0.1, 0.1, 0.1], high: [1.0, 1.0, 1.0]}
      cost = {source: fit, pilot: 200, model: gp, clock: virtual}
      penalty = {type: power, k: 1}
      abc = {epsilon: 0.5, budget: 10000, pilot: 500}
      observed = {theta_true: [0.5, 0.5, 0.5]}
      diagnose = {ks: [0.25, 0.5, 0.75, 1, 1.5, 2], n_mc: 100000, threshold: 0.95}
    )");
  }
  if (name == "radio") {
    return parse(R"(
      simulator = radio
      sim = {m: 50}
      prior = {type: box, low: [1e-9, 1e-9, 1e8, 1e-28], high: [1e-8, 1e-8, 1e9, 1e-26]}
      cost = {source: fit, pilot: 50, model: linear, clock: virtual}
      penalty = {type: power, k: 2}
      abc = {epsilon: 1.0, budget: 2000, pilot: 100}
      observed = {theta_true: [5e-9, 5e-9, 5e8, 1e-27]}
      diagnose = {ks: [0.5, 1, 2, 3], n_mc: 20000, threshold: 0.95}
    )");
  }
  if (name == "gaussian-toy") {
    return parse(R"(
      simulator = gaussian_toy
      sim = {m: 100}
      prior = {type: box, low: -5, high: 5}
      cost = {source: preset, name: gaussian-toy}
      penalty = {type: power, k: 1}
      abc = {epsilon: 0.05, budget: 50000, pilot: 500}
      observed = {theta_true: 2}
      diagnose = {ks: [0.5, 1, 2, 3], n_mc: 100000, threshold: 0.95}
    )");
  }
  throw ConfigError("unknown preset: " + name);
}

namespace {

PenaltySpec penalty_from_value(const ConfigValue& v) {
  if (v.type == ConfigValue::Type::string && v.text == "auto") {
    throw ConfigError("penalty 'auto' must be handled before penalty_from_value");
  }
  if (v.type != ConfigValue::Type::map) {
    throw ConfigError("penalty must be a map {type: ..., ...} or 'auto'");
  }
  const ConfigValue* type = v.find("type");
  if (type == nullptr) throw ConfigError("penalty.type is required");
  const std::string t = type->as_string("penalty.type");
  if (t == "constant") {
    const ConfigValue* value = v.find("value");
    return PenaltySpec::constant(value == nullptr ? 1.0 : value->as_number("penalty.value"));
  }
  if (t == "power") {
    const ConfigValue* k = v.find("k");
    if (k == nullptr) throw ConfigError("penalty.k is required for type power");
    return PenaltySpec::power(k->as_number("penalty.k"));
  }
  if (t == "clamp_below" || t == "clamp_above") {
    PenaltySpec inner = [&] {
      if (const ConfigValue* nested = v.find("inner")) return penalty_from_value(*nested);
      const ConfigValue* k = v.find("k");
      if (k == nullptr) throw ConfigError("penalty." + t + " needs 'inner' or 'k'");
      return PenaltySpec::power(k->as_number("penalty.k"));
    }();
    if (t == "clamp_below") return PenaltySpec::clamp_below(std::move(inner));
    const ConfigValue* cap = v.find("cap");
    if (cap == nullptr) throw ConfigError("penalty.clamp_above requires 'cap'");
    return PenaltySpec::clamp_above(std::move(inner), cap->as_number("penalty.cap"));
  }
  throw ConfigError("unknown penalty.type: " + t);
}

PriorSpec prior_from_value(const ConfigValue& v) {
  if (v.type != ConfigValue::Type::map) throw ConfigError("prior must be a map");
  const ConfigValue* type = v.find("type");
  const std::string t = type == nullptr ? "box" : type->as_string("prior.type");
  if (t == "box") {
    const ConfigValue* low = v.find("low");
    const ConfigValue* high = v.find("high");
    if (low == nullptr || high == nullptr) throw ConfigError("prior.low and prior.high required");
    return PriorSpec::box_uniform(low->as_numbers("prior.low"), high->as_numbers("prior.high"));
  }
  if (t == "gaussian") {
    const ConfigValue* mean = v.find("mean");
    const ConfigValue* stddev = v.find("stddev");
    if (mean == nullptr || stddev == nullptr) {
      throw ConfigError("prior.mean and prior.stddev required");
    }
    return PriorSpec::gaussian(mean->as_numbers("prior.mean"),
                               stddev->as_numbers("prior.stddev"));
  }
  throw ConfigError("unknown prior.type: " + t);
}

CostSource cost_from_value(const ConfigValue& v) {
  if (v.type != ConfigValue::Type::map) throw ConfigError("cost must be a map");
  const ConfigValue* source = v.find("source");
  if (source == nullptr) throw ConfigError("cost.source is required");
  const std::string s = source->as_string("cost.source");
  CostSource cost;
  if (s == "preset") {
    cost.kind = CostSource::Kind::preset;
    const ConfigValue* name = v.find("name");
    if (name == nullptr) throw ConfigError("cost.name is required for source preset");
    cost.preset_name = name->as_string("cost.name");
    CostModel::preset(cost.preset_name);  // validate early
    return cost;
  }
  if (s == "analytic") {
    cost.kind = CostSource::Kind::analytic;
    const ConfigValue* kind = v.find("kind");
    const std::string k = kind == nullptr ? "linear" : kind->as_string("cost.kind");
    const ConfigValue* alpha = v.find("alpha");
    if (alpha == nullptr) throw ConfigError("cost.alpha is required for source analytic");
    if (k == "linear") {
      const ConfigValue* beta = v.find("beta");
      cost.analytic = CostModel::analytic_linear(alpha->as_numbers("cost.alpha"),
                                                 beta == nullptr ? 0.0
                                                                 : beta->as_number("cost.beta"));
    } else if (k == "quadratic") {
      cost.analytic = CostModel::analytic_quadratic(alpha->as_numbers("cost.alpha"));
    } else {
      throw ConfigError("unknown cost.kind: " + k);
    }
    return cost;
  }
  if (s == "fit") {
    cost.kind = CostSource::Kind::fit;
    if (const ConfigValue* pilot = v.find("pilot")) {
      cost.pilot_n = static_cast<std::size_t>(pilot->as_number("cost.pilot"));
    }
    if (const ConfigValue* model = v.find("model")) {
      cost.model = model->as_string("cost.model");
      if (cost.model != "linear" && cost.model != "polynomial" && cost.model != "gp") {
        throw ConfigError("cost.model must be linear, polynomial or gp");
      }
    }
    if (const ConfigValue* degree = v.find("degree")) {
      cost.degree = static_cast<int>(degree->as_number("cost.degree"));
    }
    if (const ConfigValue* clock = v.find("clock")) {
      const std::string c = clock->as_string("cost.clock");
      if (c == "wall") {
        cost.clock = Clock::wall;
      } else if (c == "virtual") {
        cost.clock = Clock::virtual_units;
      } else {
        throw ConfigError("cost.clock must be wall or virtual");
      }
    }
    return cost;
  }
  if (s == "file") {
    cost.kind = CostSource::Kind::file;
    const ConfigValue* path = v.find("path");
    if (path == nullptr) throw ConfigError("cost.path is required for source file");
    cost.path = path->as_string("cost.path");
    return cost;
  }
  throw ConfigError("unknown cost.source: " + s);
}

}  // namespace

ExperimentConfig build_experiment(const Config& user) {
  Config merged;
  if (const auto it = user.find("preset"); it != user.end()) {
    merged = preset_config(it->second.as_string("preset"));
  }
  for (const auto& [key, value] : user) merged[key] = value;

  ExperimentConfig exp;
  exp.raw = merged;

  if (const auto it = merged.find("seed"); it != merged.end()) {
    exp.seed = static_cast<std::uint64_t>(it->second.as_number("seed"));
  }
  if (const auto it = merged.find("workers"); it != merged.end()) {
    exp.workers = static_cast<int>(it->second.as_number("workers"));
    if (exp.workers < 1) throw ConfigError("workers must be >= 1");
  }
  if (const auto it = merged.find("out"); it != merged.end()) {
    exp.out_dir = it->second.as_string("out");
  }

  if (const auto it = merged.find("simulator"); it != merged.end()) {
    exp.simulator_name = it->second.as_string("simulator");
  }
  if (const auto it = merged.find("sim"); it != merged.end()) {
    if (it->second.type != ConfigValue::Type::map) throw ConfigError("sim must be a map");
    for (const auto& [k, v] : it->second.entries) {
      if (k == "m") {
        exp.m = static_cast<int>(v.as_number("sim.m"));
      } else {
        exp.simulator_options[k] = v.as_number("sim." + k);
      }
    }
  }

  // Validates the simulator name and gives the default prior.
  const Simulator sim = make_simulator(exp.simulator_name, exp.simulator_options);
  exp.prior = sim.default_prior();
  if (const auto it = merged.find("prior"); it != merged.end()) {
    exp.prior = prior_from_value(it->second);
  }
  if (exp.prior.dim() != sim.param_dim()) {
    throw ConfigError("prior dimension " + std::to_string(exp.prior.dim()) +
                      " does not match simulator parameter dimension " +
                      std::to_string(sim.param_dim()));
  }

  if (const auto it = merged.find("cost"); it != merged.end()) {
    exp.cost = cost_from_value(it->second);
  }

  if (const auto it = merged.find("penalty"); it != merged.end()) {
    if (it->second.type == ConfigValue::Type::string && it->second.text == "auto") {
      exp.penalty_auto = true;
    } else {
      exp.penalty = penalty_from_value(it->second);
    }
  }
  if (const auto it = merged.find("mis"); it != merged.end()) {
    const ConfigValue* ks = it->second.find("ks");
    if (ks == nullptr) throw ConfigError("mis.ks is required");
    exp.mis_ks = ks->as_numbers("mis.ks");
    if (exp.mis_ks->empty() || exp.mis_ks->front() != 0.0) {
      throw ConfigError("mis.ks must start with 0 (the constant-penalty target)");
    }
  }

  if (const auto it = merged.find("abc"); it != merged.end()) {
    if (const ConfigValue* eps = it->second.find("epsilon")) {
      exp.epsilon = eps->as_number("abc.epsilon");
      if (!(exp.epsilon > 0.0)) throw ConfigError("abc.epsilon must be positive");
    }
    if (const ConfigValue* budget = it->second.find("budget")) {
      exp.abc_budget = static_cast<std::size_t>(budget->as_number("abc.budget"));
      if (exp.abc_budget < 1) throw ConfigError("abc.budget must be >= 1");
    }
    if (const ConfigValue* pilot = it->second.find("pilot")) {
      exp.pilot_n = static_cast<std::size_t>(pilot->as_number("abc.pilot"));
    }
  }
  if (const auto it = merged.find("observed"); it != merged.end()) {
    if (const ConfigValue* theta = it->second.find("theta_true")) {
      exp.theta_true = theta->as_numbers("observed.theta_true");
    }
    if (const ConfigValue* summary = it->second.find("summary")) {
      exp.observed_summary = summary->as_numbers("observed.summary");
    }
  }
  if (exp.theta_true.empty()) {
    // Mid-range of the prior support as a fallback truth for synthetic runs.
    const Box box = exp.prior.support_box();
    for (std::size_t d = 0; d < box.dim(); ++d) {
      exp.theta_true.push_back(0.5 * (box.low[d] + box.high[d]));
    }
  }
  if (exp.theta_true.size() != sim.param_dim()) {
    throw ConfigError("observed.theta_true dimension does not match the simulator");
  }

  if (const auto it = merged.find("diagnose"); it != merged.end()) {
    if (const ConfigValue* ks = it->second.find("ks")) {
      exp.diagnose_ks = ks->as_numbers("diagnose.ks");
    }
    if (const ConfigValue* n_mc = it->second.find("n_mc")) {
      exp.diagnose_n_mc = static_cast<std::size_t>(n_mc->as_number("diagnose.n_mc"));
    }
    if (const ConfigValue* threshold = it->second.find("threshold")) {
      exp.diagnose_threshold = threshold->as_number("diagnose.threshold");
    }
  }
  if (const auto it = merged.find("sample"); it != merged.end()) {
    if (const ConfigValue* n = it->second.find("n")) {
      exp.sample_n = static_cast<std::size_t>(n->as_number("sample.n"));
    }
    if (const ConfigValue* simulate = it->second.find("simulate")) {
      exp.sample_simulate = simulate->as_number("sample.simulate") != 0.0;
    }
  }
  if (const auto it = merged.find("export"); it != merged.end()) {
    if (const ConfigValue* n = it->second.find("n")) {
      exp.export_n = static_cast<std::size_t>(n->as_number("export.n"));
    }
    if (const ConfigValue* reps = it->second.find("reps")) {
      exp.export_reps = static_cast<std::size_t>(reps->as_number("export.reps"));
    }
  }
  if (const auto it = merged.find("metrics"); it != merged.end()) {
    if (const ConfigValue* ref = it->second.find("reference")) {
      exp.metrics_reference = ref->as_string("metrics.reference");
    }
  }
  return exp;
}

}  // namespace casbi
