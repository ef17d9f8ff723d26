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

#include <doctest.h>

#include "casbi/config.hpp"
#include "casbi/errors.hpp"

using namespace casbi;

TEST_SUITE("config") {
  TEST_CASE("parses scalars, strings, lists, and nested maps") {
    const Config c = parse_config_string(R"(
      seed = 42            # trailing comment
      simulator = gamma
      prior = {type: box, low: [0.1, 0.2], high: [1, 2]}
      penalty = {type: power, k: 1.5}
    )");
    CHECK(c.at("seed").as_number("seed") == 42.0);
    CHECK(c.at("simulator").as_string("simulator") == "gamma");
    CHECK(c.at("prior").find("low")->as_numbers("low") == std::vector<double>{0.1, 0.2});
    CHECK(c.at("penalty").find("k")->as_number("k") == 1.5);
  }

  TEST_CASE("multi-line values are accepted") {
    const Config c = parse_config_string("prior = {type: box,\n  low: 1,\n  high: 2}\n");
    CHECK(c.at("prior").find("high")->as_number("high") == 2.0);
  }

  TEST_CASE("malformed input names the line") {
    CHECK_THROWS_AS(parse_config_string("seed 42\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_string("x = {a: 1\n"), ConfigError);
  }

  TEST_CASE("canonical serialisation is order-independent") {
    const Config a = parse_config_string("a = 1\nb = {x: 2, y: 3}\n");
    const Config b = parse_config_string("b = {y: 3, x: 2}\na = 1\n");
    CHECK(canonical_config(a) == canonical_config(b));
    CHECK(fnv1a_hash(canonical_config(a)) == fnv1a_hash(canonical_config(b)));
  }

  TEST_CASE("preset expansion with user overrides") {
    Config user = parse_config_string(R"(
      preset = gamma
      seed = 7
      abc = {epsilon: 0.1, budget: 1000}
    )");
    const ExperimentConfig exp = build_experiment(user);
    CHECK(exp.simulator_name == "gamma");
    CHECK(exp.seed == 7);
    CHECK(exp.epsilon == 0.1);
    CHECK(exp.abc_budget == 1000);
    CHECK(exp.m == 500);  // preset constant survives the override
    CHECK(exp.prior.low_or_mean()[0] == 100.0);
    CHECK(exp.theta_true == std::vector<double>{250.0});
  }

  TEST_CASE("every bundled preset builds") {
    for (const char* name : {"gamma", "sir-homogeneous", "sir-temporal", "sir-bernoulli",
                             "radio", "gaussian-toy"}) {
      Config user;
      ConfigValue v;
      v.type = ConfigValue::Type::string;
      v.text = name;
      user["preset"] = v;
      const ExperimentConfig exp = build_experiment(user);
      CHECK(exp.make_sim().param_dim() == exp.prior.dim());
    }
  }

  TEST_CASE("penalty variants and auto mode") {
    CHECK(build_experiment(parse_config_string("penalty = {type: power, k: 2}\n"))
              .penalty->power_exponent() == 2.0);
    CHECK(build_experiment(parse_config_string("penalty = auto\n")).penalty_auto);
    const ExperimentConfig clamp = build_experiment(
        parse_config_string("penalty = {type: clamp_above, k: 2, cap: 10}\n"));
    CHECK((*clamp.penalty)(100.0) == 10.0);
    CHECK_THROWS_AS(build_experiment(parse_config_string("penalty = {type: odd}\n")),
                    ConfigError);
  }

  TEST_CASE("field-level validation errors carry the field name") {
    CHECK_THROWS_WITH_AS(static_cast<void>(build_experiment(
                             parse_config_string("abc = {epsilon: -1}\n"))),
                         doctest::Contains("epsilon"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(build_experiment(parse_config_string(
                             "prior = {type: box, low: 1, high: 2}\nsimulator = sir_temporal\n"))),
                         doctest::Contains("dimension"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(build_experiment(parse_config_string(
                             "mis = {ks: [1, 2]}\n"))),
                         doctest::Contains("mis.ks"), ConfigError);
  }

  TEST_CASE("cost sources resolve") {
    const ExperimentConfig preset = build_experiment(
        parse_config_string("cost = {source: preset, name: gamma-cost-text}\n"));
    CHECK(preset.cost.kind == CostSource::Kind::preset);
    const ExperimentConfig analytic = build_experiment(parse_config_string(
        "cost = {source: analytic, kind: quadratic, alpha: 2}\nprior = {type: box, low: 1, high: 2}\n"));
    CHECK(analytic.cost.kind == CostSource::Kind::analytic);
    CHECK(analytic.cost.analytic.eval1(2.0) == doctest::Approx(8.0));
    const ExperimentConfig fit = build_experiment(parse_config_string(
        "cost = {source: fit, pilot: 37, model: gp, clock: virtual}\n"));
    CHECK(fit.cost.kind == CostSource::Kind::fit);
    CHECK(fit.cost.pilot_n == 37);
    CHECK(fit.cost.model == "gp");
    CHECK_THROWS_AS(build_experiment(parse_config_string("cost = {source: magic}\n")),
                    ConfigError);
  }

  TEST_CASE("metadata line hashes the experiment but not workers or out") {
    ExperimentConfig a = build_experiment(parse_config_string("seed = 3\nworkers = 1\n"));
    ExperimentConfig b = build_experiment(parse_config_string("seed = 3\nworkers = 16\nout = x\n"));
    CHECK(a.metadata() == b.metadata());
    ExperimentConfig c = build_experiment(parse_config_string("seed = 4\n"));
    CHECK(a.metadata() != c.metadata());
  }
}
