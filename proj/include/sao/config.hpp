#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sao {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

// Reward-source description.  `kind` selects the model and decides which of
// the remaining fields are meaningful:
//   stochastic:       means (Bernoulli parameter per arm)
//   constant:         constants (fixed reward per arm)
//   hash:             num_arms, hash_seed (seeded deterministic oblivious
//                     rewards)
//   stochastic-then-flip: means, means_after, switch_round
//   gap-inflater:     means, switch_round, optional means_after
//   gap-collapser:    means, switch_round, collapse_fraction
//   estimator-skewer: means, switch_round, second_switch_round,
//                     optional boosted_means and final_means
struct EnvironmentSpec {
  std::string kind = "stochastic";
  std::vector<double> means;
  std::vector<double> constants;
  int num_arms = 0;
  std::uint64_t hash_seed = 0;
  std::int64_t switch_round = 0;
  std::int64_t second_switch_round = 0;
  std::vector<double> means_after;
  std::vector<double> boosted_means;
  std::vector<double> final_means;
  double collapse_fraction = 1.0;

  // Number of arms the environment will expose; throws ConfigError when the
  // spec cannot determine it.
  int arms() const;
};

// Policy description.  `kind` is one of sao, simple-sao, ucb1, exp3, exp3p.
// beta_mode/beta_value/delta/test_set configure sao; delta also sets the
// exp3p guarantee level and the adversarial-fallback confidence;
// ccrn_multiplier/exploration_floor_multiplier configure simple-sao, whose
// threshold constant becomes ccrn_multiplier * ln(horizon).
struct PolicySpec {
  std::string kind;
  std::string label;  // defaults to kind; must be unique within a config
  std::string beta_mode = "n4";  // n4 | high-prob | fixed
  double beta_value = 0.0;
  double delta = 0.05;
  std::string test_set = "live";  // live | snapshot
  double ccrn_multiplier = 12.0;
  double exploration_floor_multiplier = 8.0;
};

struct ExperimentConfig {
  std::int64_t horizon = 0;
  int replicates = 1;
  std::uint64_t seed = 1;
  // Rounds at which regret is recorded; strictly increasing, within
  // [1, horizon].  Empty selects the default geometric grid.
  std::vector<std::int64_t> checkpoints;
  EnvironmentSpec environment;
  std::vector<PolicySpec> policies;

  // Fills defaulted fields (checkpoints, policy labels) and validates the
  // whole config; throws ConfigError with the offending key.  Idempotent.
  void finalize();
};

// The default checkpoint schedule: ceil(horizon / 2^k) for k = 0, 1, ...
// down to 1, ascending.
std::vector<std::int64_t> default_checkpoints(std::int64_t horizon);

// Strict INI-style parser.  Sections [experiment], [environment] (at most
// once each) and [policy] (repeatable); full-line # comments; key = value
// pairs.  Unknown sections or keys, duplicate keys, and malformed values are
// ConfigErrors.  The result is finalized.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form: fixed key order, kind-relevant keys only,
// 17-significant-digit floats.  Parsing it back yields an equal config.
std::string normalize_config(const ExperimentConfig& config);

// FNV-1a 64-bit hash, applied to the normalized text for config identity.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace sao
