#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sao/config.hpp"
#include "sao/environments.hpp"
#include "sao/policies.hpp"
#include "sao/round_record.hpp"

namespace sao {

// Build the reward process / policy a spec describes; both throw ConfigError
// on inconsistent specs.
std::unique_ptr<RewardProcess> make_environment(const EnvironmentSpec& spec);
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, int num_arms,
                                    std::int64_t horizon);

struct EpisodeResult {
  std::vector<RoundRecord> trace;  // empty when keep_trace is false
  double adversarial_regret = 0.0;
  std::optional<double> pseudo_regret;  // stochastic environments only
  // pseudo_regret for stochastic environments, adversarial_regret otherwise.
  double final_regret = 0.0;
  // Round whose tests handed play to the adversarial fallback, or -1.
  std::int64_t switch_round = -1;
  FiredTest switch_test = FiredTest::kNone;
  // Per-arm deactivation rounds (-1 while active); empty for policies
  // without an active-set mechanism.
  std::vector<std::int64_t> deactivation_rounds;
  // Regret at each config checkpoint, same definition as final_regret.
  std::vector<double> checkpoint_regret;
};

// Runs one deterministic episode: the environment stream depends only on
// (config seed, replicate), so policies compared under the same replicate
// face identical stochastic/oblivious reward draws; the policy stream also
// mixes in policy_index.
EpisodeResult run_episode(const ExperimentConfig& config, int policy_index,
                          std::int64_t replicate, bool keep_trace = true);

struct AggregateRow {
  std::int64_t checkpoint = 0;
  std::string policy;
  double mean_regret = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  // Fraction of replicates whose adversarial fallback started at or before
  // the checkpoint (0 for policies without one).
  double exp3p_start_freq = 0.0;
  // Theoretical regret ceiling evaluated at the checkpoint horizon (NaN for
  // policies without one).
  double envelope = 0.0;
  // min(envelope, gap * checkpoint) on stochastic environments,
  // min(envelope, checkpoint) otherwise; the envelope is vacuous whenever it
  // exceeds this cap.
  double capped_envelope = 0.0;
};

// Receives each finished episode's trace; called concurrently from worker
// threads, so implementations must be safe for distinct (label, replicate)
// pairs in flight at once.
using TraceSink = std::function<void(
    const std::string& policy_label, std::int64_t replicate,
    const std::vector<RoundRecord>& trace)>;

struct MonteCarloResult {
  // Ordered by checkpoint, then by policy position in the config.
  std::vector<AggregateRow> rows;
  // episodes[policy][replicate], traces cleared to keep memory flat.
  std::vector<std::vector<EpisodeResult>> episodes;
};

MonteCarloResult run_monte_carlo(const ExperimentConfig& config,
                                 int parallel = 1,
                                 const TraceSink* sink = nullptr);

// Quantile with linear interpolation between closest ranks (q in [0, 1]).
double quantile(std::vector<double> values, double q);

// CSV with header
// checkpoint,policy,mean_regret,median,p90,exp3p_start_freq,envelope,capped_envelope
std::string aggregate_csv_text(const std::vector<AggregateRow>& rows);

// Comment header (version, config hash, seed) followed by the normalized
// config; parsing the file back yields an equivalent config.
std::string manifest_text(const ExperimentConfig& config);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partial file.
void write_text_atomically(const std::string& text, const std::string& path);

}  // namespace sao
