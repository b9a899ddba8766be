#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "sao/config.hpp"
#include "sao/errors.hpp"

using namespace sao;

namespace {

const char kMinimalConfig[] =
    "[experiment]\n"
    "horizon = 10\n"
    "replicates = 3\n"
    "seed = 42\n"
    "\n"
    "[environment]\n"
    "kind = stochastic\n"
    "means = 0.7,0.4\n"
    "\n"
    "[policy]\n"
    "kind = sao\n";

// Returns the ConfigError message for text that must fail to parse.
std::string parse_failure(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError");
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("a minimal config parses with defaults filled in") {
  const ExperimentConfig cfg = parse_config_text(kMinimalConfig);
  CHECK(cfg.horizon == 10);
  CHECK(cfg.replicates == 3);
  CHECK(cfg.seed == 42);
  CHECK(cfg.environment.kind == "stochastic");
  CHECK(cfg.environment.means == std::vector<double>{0.7, 0.4});
  CHECK(cfg.environment.arms() == 2);
  REQUIRE(cfg.policies.size() == 1);
  CHECK(cfg.policies[0].kind == "sao");
  // Label defaults to the kind; beta mode defaults to n4.
  CHECK(cfg.policies[0].label == "sao");
  CHECK(cfg.policies[0].beta_mode == "n4");
  // Default checkpoints: the halving grid.
  CHECK(cfg.checkpoints == std::vector<std::int64_t>{1, 2, 3, 5, 10});
}

TEST_CASE("the default checkpoint grid halves down to one round") {
  CHECK(default_checkpoints(1) == std::vector<std::int64_t>{1});
  CHECK(default_checkpoints(10) == std::vector<std::int64_t>{1, 2, 3, 5, 10});
  CHECK(default_checkpoints(1000) ==
        std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 63, 125, 250, 500,
                                  1000});
}

TEST_CASE("normalize is a fixpoint under reparsing") {
  const ExperimentConfig cfg = parse_config_text(kMinimalConfig);
  const std::string once = normalize_config(cfg);
  const std::string twice = normalize_config(parse_config_text(once));
  CHECK(once == twice);
  CHECK(fnv1a64(once) == fnv1a64(twice));
}

TEST_CASE("normalized text keeps only kind-relevant environment keys") {
  ExperimentConfig cfg;
  cfg.horizon = 100;
  cfg.replicates = 2;
  cfg.seed = 7;
  cfg.environment.kind = "constant";
  cfg.environment.constants = {0.7, 0.3};
  // Stray fields for other kinds must not leak into the canonical form.
  cfg.environment.means = {0.9, 0.1};
  cfg.environment.switch_round = 5;
  PolicySpec ps;
  ps.kind = "exp3p";
  ps.delta = 0.01;
  cfg.policies.push_back(ps);
  cfg.finalize();
  const std::string norm = normalize_config(cfg);
  CHECK(contains(norm, "kind = constant"));
  CHECK(contains(norm, "constants = 0.69999999999999996,0.29999999999999999"));
  CHECK_FALSE(contains(norm, "means"));
  CHECK_FALSE(contains(norm, "switch_round"));
  // Floats are written with 17 significant digits; reparsing is lossless.
  const ExperimentConfig back = parse_config_text(norm);
  CHECK(back.environment.constants == cfg.environment.constants);
  CHECK(normalize_config(back) == norm);
}

TEST_CASE("parse errors carry the offending line number") {
  CHECK(contains(parse_failure("[experiment]\nbogus_key = 1\n"),
                 "config line 2"));
  CHECK(contains(parse_failure("[experiment]\nbogus_key = 1\n"),
                 "unknown [experiment] key 'bogus_key'"));
  CHECK(contains(parse_failure("[mystery]\n"), "unknown section [mystery]"));
  CHECK(contains(parse_failure("horizon = 5\n"), "outside any section"));
  CHECK(contains(parse_failure("[experiment]\nhorizon = 5\nhorizon = 6\n"),
                 "duplicate key 'horizon'"));
  CHECK(contains(parse_failure("[experiment]\nhorizon == 5\n"),
                 "config line 2"));
  CHECK(contains(parse_failure("[experiment]\nhorizon = five\n"),
                 "config line 2"));
  CHECK(contains(
      parse_failure(std::string(kMinimalConfig) + "[experiment]\n"),
      "duplicate [experiment] section"));
}

TEST_CASE("full-line comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_config_text(
      "# leading comment\n"
      "[experiment]\n"
      "horizon = 10\n"
      "\n"
      "# embedded comment\n"
      "[environment]\n"
      "kind = stochastic\n"
      "means = 0.7,0.4\n"
      "[policy]\n"
      "kind = ucb1\n");
  CHECK(cfg.horizon == 10);
}

TEST_CASE("finalize validates the assembled config") {
  auto base = [] { return parse_config_text(kMinimalConfig); };

  SUBCASE("horizon must cover the arm count") {
    auto cfg = base();
    cfg.horizon = 1;
    CHECK_THROWS_WITH_AS(
        cfg.finalize(),
        "experiment requires horizon >= num_arms >= 2 (got horizon 1, 2 "
        "arms)",
        ConfigError);
  }
  SUBCASE("replicates must be positive") {
    auto cfg = base();
    cfg.replicates = 0;
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("checkpoints must be increasing and within the horizon") {
    auto cfg = base();
    cfg.checkpoints = {5, 5};
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg.checkpoints = {5, 11};
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg.checkpoints = {0, 5};
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("environment kinds are a closed set") {
    auto cfg = base();
    cfg.environment.kind = "drifting";
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("means must be probabilities") {
    auto cfg = base();
    cfg.environment.means = {0.7, 1.4};
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("policy kinds are a closed set") {
    auto cfg = base();
    cfg.policies[0].kind = "thompson";
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("policy labels must be unique") {
    auto cfg = base();
    cfg.policies.push_back(cfg.policies[0]);
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("beta settings are checked per mode") {
    auto cfg = base();
    cfg.policies[0].beta_mode = "squared";
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg.policies[0].beta_mode = "fixed";
    cfg.policies[0].beta_value = 1.0;
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg.policies[0].beta_value = 1.5;
    CHECK_NOTHROW(cfg.finalize());
  }
  SUBCASE("delta must be a confidence level") {
    auto cfg = base();
    cfg.policies[0].beta_mode = "high-prob";
    cfg.policies[0].delta = 1.0;
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("simple-sao needs a two-arm environment") {
    auto cfg = base();
    cfg.environment.means = {0.7, 0.4, 0.1};
    cfg.policies[0].kind = "simple-sao";
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("test_set is live or snapshot") {
    auto cfg = base();
    cfg.policies[0].test_set = "frozen";
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg.policies[0].test_set = "snapshot";
    CHECK_NOTHROW(cfg.finalize());
  }
  SUBCASE("finalize is idempotent") {
    auto cfg = base();
    cfg.finalize();
    const std::string before = normalize_config(cfg);
    cfg.finalize();
    CHECK(normalize_config(cfg) == before);
  }
}

TEST_CASE("scheduled environments need their schedule keys") {
  const char* flip_missing =
      "[experiment]\n"
      "horizon = 100\n"
      "[environment]\n"
      "kind = stochastic-then-flip\n"
      "means = 0.9,0.1\n"
      "[policy]\n"
      "kind = exp3\n";
  CHECK(contains(parse_failure(flip_missing), "switch_round"));

  const std::string flip_ok = std::string(flip_missing).replace(
      std::string(flip_missing).find("means = 0.9,0.1\n"), 16,
      "means = 0.9,0.1\nmeans_after = 0.1,0.9\nswitch_round = 50\n");
  const ExperimentConfig cfg = parse_config_text(flip_ok);
  CHECK(cfg.environment.kind == "stochastic-then-flip");
  CHECK(cfg.environment.switch_round == 50);
  CHECK(cfg.environment.means_after == std::vector<double>{0.1, 0.9});
}

TEST_CASE("environment arm counts are derived per kind") {
  EnvironmentSpec hash;
  hash.kind = "hash";
  hash.num_arms = 4;
  CHECK(hash.arms() == 4);
  EnvironmentSpec constant;
  constant.kind = "constant";
  constant.constants = {0.5, 0.4, 0.3};
  CHECK(constant.arms() == 3);
  EnvironmentSpec empty;
  empty.kind = "stochastic";
  CHECK_THROWS_AS(empty.arms(), ConfigError);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("load_config_file reports unreadable paths") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/path/config.ini"),
                  ConfigError);
}
