#include "sao/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "sao/envelopes.hpp"
#include "sao/errors.hpp"
#include "sao/regret_ledger.hpp"
#include "sao/rng.hpp"
#include "sao/sao.hpp"
#include "sao/simple_sao.hpp"

namespace sao {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

ProbeParams probe_params(const EnvironmentSpec& spec) {
  ProbeParams params;
  params.means = spec.means;
  params.means_after = spec.means_after;
  params.switch_round = spec.switch_round;
  params.second_switch_round = spec.second_switch_round;
  params.collapse_fraction = spec.collapse_fraction;
  params.boosted_means = spec.boosted_means;
  params.final_means = spec.final_means;
  return params;
}

// Smallest positive distance from the best mean; 0 when all means tie.
double minimal_gap(const std::vector<double>& means) {
  const double best = *std::max_element(means.begin(), means.end());
  double gap = std::numeric_limits<double>::infinity();
  for (double mean : means) {
    if (mean < best) {
      gap = std::min(gap, best - mean);
    }
  }
  return std::isfinite(gap) ? gap : 0.0;
}

bool is_switch_test(FiredTest test) {
  switch (test) {
    case FiredTest::kCond2:
    case FiredTest::kCond3:
    case FiredTest::kConsistency8:
    case FiredTest::kConsistency9:
    case FiredTest::kConsistency10:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::unique_ptr<RewardProcess> make_environment(const EnvironmentSpec& spec) {
  if (spec.kind == "stochastic") {
    return std::make_unique<StochasticEnvironment>(
        StochasticEnvironment::bernoulli(spec.means));
  }
  if (spec.kind == "constant") {
    return std::make_unique<ConstantAdversary>(spec.constants);
  }
  if (spec.kind == "hash") {
    return std::make_unique<HashAdversary>(spec.num_arms, spec.hash_seed);
  }
  if (spec.kind == "stochastic-then-flip" || spec.kind == "gap-inflater" ||
      spec.kind == "gap-collapser" || spec.kind == "estimator-skewer") {
    return make_probe_adversary(spec.kind, probe_params(spec));
  }
  throw ConfigError("unknown environment kind '" + spec.kind + "'");
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, int num_arms,
                                    std::int64_t horizon) {
  if (spec.kind == "sao") {
    SaoPolicy::Options options;
    if (spec.beta_mode == "n4") {
      options.beta_mode = SaoPolicy::BetaMode::kN4;
    } else if (spec.beta_mode == "high-prob") {
      options.beta_mode = SaoPolicy::BetaMode::kHighProb;
    } else if (spec.beta_mode == "fixed") {
      options.beta_mode = SaoPolicy::BetaMode::kFixed;
    } else {
      throw ConfigError("unknown beta_mode '" + spec.beta_mode + "'");
    }
    options.delta = spec.delta;
    options.beta_value = spec.beta_value;
    options.snapshot_tests = spec.test_set == "snapshot";
    return std::make_unique<SaoPolicy>(num_arms, horizon, options);
  }
  if (spec.kind == "simple-sao") {
    if (num_arms != 2) {
      throw ConfigError("simple-sao supports exactly 2 arms");
    }
    SimpleSaoPolicy::Options options;
    options.c_crn =
        spec.ccrn_multiplier * std::log(static_cast<double>(horizon));
    options.exploration_floor_multiplier = spec.exploration_floor_multiplier;
    options.fallback_delta = spec.delta;
    return std::make_unique<SimpleSaoPolicy>(horizon, options);
  }
  if (spec.kind == "ucb1") {
    return std::make_unique<Ucb1Policy>(num_arms, horizon);
  }
  if (spec.kind == "exp3") {
    return std::make_unique<Exp3Policy>(num_arms, horizon);
  }
  if (spec.kind == "exp3p") {
    return std::make_unique<Exp3PPolicy>(num_arms, horizon, spec.delta);
  }
  throw ConfigError("unknown policy kind '" + spec.kind + "'");
}

EpisodeResult run_episode(const ExperimentConfig& config, int policy_index,
                          std::int64_t replicate, bool keep_trace) {
  ExperimentConfig cfg = config;
  cfg.finalize();
  if (policy_index < 0 ||
      policy_index >= static_cast<int>(cfg.policies.size())) {
    throw ConfigError("policy index " + std::to_string(policy_index) +
                      " out of range");
  }
  if (replicate < 0 || replicate >= cfg.replicates) {
    throw ConfigError("replicate " + std::to_string(replicate) +
                      " out of range");
  }
  const int num_arms = cfg.environment.arms();
  const auto environment = make_environment(cfg.environment);
  const auto policy =
      make_policy(cfg.policies[static_cast<std::size_t>(policy_index)],
                  num_arms, cfg.horizon);

  Rng env_rng(derive_seed(cfg.seed, kEnvironmentStream, replicate));
  Rng policy_rng(derive_seed(
      cfg.seed, kPolicyStreamBase + static_cast<std::uint64_t>(policy_index),
      replicate));

  PlayHistory history;
  RegretLedger ledger(num_arms, environment->means());
  const bool stochastic = environment->means().has_value();

  EpisodeResult result;
  if (keep_trace) {
    result.trace.reserve(static_cast<std::size_t>(cfg.horizon));
  }
  result.checkpoint_regret.reserve(cfg.checkpoints.size());
  std::size_t next_checkpoint = 0;

  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    const int arm = policy->select(t, policy_rng);
    std::vector<double> probabilities = policy->probabilities();
    const std::vector<double> rewards =
        draw_round(*environment, t, history, env_rng);
    const double reward = rewards[static_cast<std::size_t>(arm)];
    policy->observe(t, arm, reward);
    ledger.on_round(rewards, arm);
    history.push(arm, rewards);

    const FiredTest fired = policy->last_fired();
    if (result.switch_test == FiredTest::kNone && is_switch_test(fired)) {
      result.switch_test = fired;
      result.switch_round = t;
    }
    if (keep_trace) {
      result.trace.push_back({t, policy->phase(), arm, reward, fired,
                              std::move(probabilities)});
    }
    if (next_checkpoint < cfg.checkpoints.size() &&
        t == cfg.checkpoints[next_checkpoint]) {
      result.checkpoint_regret.push_back(
          stochastic ? ledger.pseudo_regret() : ledger.adversarial_regret());
      ++next_checkpoint;
    }
  }

  result.adversarial_regret = ledger.adversarial_regret();
  if (stochastic) {
    result.pseudo_regret = ledger.pseudo_regret();
  }
  result.final_regret =
      stochastic ? *result.pseudo_regret : result.adversarial_regret;
  if (const auto* sao = dynamic_cast<const SaoPolicy*>(policy.get())) {
    result.deactivation_rounds.resize(static_cast<std::size_t>(num_arms));
    for (int i = 0; i < num_arms; ++i) {
      result.deactivation_rounds[static_cast<std::size_t>(i)] =
          sao->deactivation_round(i);
    }
  }
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw OutOfDomainError("quantile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw OutOfDomainError("quantile level must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const std::size_t low = static_cast<std::size_t>(position);
  if (low + 1 >= values.size()) {
    return values.back();
  }
  const double fraction = position - static_cast<double>(low);
  return values[low] + fraction * (values[low + 1] - values[low]);
}

namespace {

// Envelope parameters resolved once per policy spec.
struct EnvelopeModel {
  enum class Kind { kNone, kStochastic, kAdversarial, kExp3P } kind =
      Kind::kNone;
  double log_beta = 0.0;
  double delta = 0.0;
  double gap = 0.0;
  int num_arms = 0;

  void evaluate(std::int64_t checkpoint, double* envelope,
                double* capped) const {
    switch (kind) {
      case Kind::kNone:
        *envelope = kNan;
        *capped = kNan;
        return;
      case Kind::kStochastic: {
        *envelope = stochastic_regret_envelope(num_arms, log_beta, gap);
        const double cap = gap * static_cast<double>(checkpoint);
        *capped = std::min(*envelope, cap);
        return;
      }
      case Kind::kAdversarial: {
        *envelope = adversarial_regret_envelope(num_arms, checkpoint,
                                                log_beta);
        *capped = std::min(*envelope, static_cast<double>(checkpoint));
        return;
      }
      case Kind::kExp3P: {
        *envelope = exp3p_regret_envelope(checkpoint, num_arms, delta);
        *capped = std::min(*envelope, static_cast<double>(checkpoint));
        return;
      }
    }
  }
};

EnvelopeModel resolve_envelope(const PolicySpec& spec, int num_arms,
                               std::int64_t horizon, bool stochastic,
                               double gap) {
  EnvelopeModel model;
  model.num_arms = num_arms;
  if (spec.kind == "sao") {
    const auto policy = make_policy(spec, num_arms, horizon);
    model.log_beta = dynamic_cast<const SaoPolicy&>(*policy).log_beta();
    if (stochastic) {
      model.kind = gap > 0.0 ? EnvelopeModel::Kind::kStochastic
                             : EnvelopeModel::Kind::kNone;
      model.gap = gap;
    } else {
      model.kind = EnvelopeModel::Kind::kAdversarial;
    }
  } else if (spec.kind == "exp3p") {
    model.kind = EnvelopeModel::Kind::kExp3P;
    model.delta = spec.delta;
  }
  return model;
}

}  // namespace

MonteCarloResult run_monte_carlo(const ExperimentConfig& config, int parallel,
                                 const TraceSink* sink) {
  ExperimentConfig cfg = config;
  cfg.finalize();
  const int num_policies = static_cast<int>(cfg.policies.size());
  const int num_arms = cfg.environment.arms();

  // Fails fast on specs the factories reject, before any episode runs.
  make_environment(cfg.environment);
  const bool stochastic = cfg.environment.kind == "stochastic";
  const double gap = stochastic ? minimal_gap(cfg.environment.means) : 0.0;
  std::vector<EnvelopeModel> envelopes;
  envelopes.reserve(static_cast<std::size_t>(num_policies));
  for (const PolicySpec& spec : cfg.policies) {
    envelopes.push_back(
        resolve_envelope(spec, num_arms, cfg.horizon, stochastic, gap));
  }

  MonteCarloResult result;
  result.episodes.assign(static_cast<std::size_t>(num_policies), {});
  for (auto& slot : result.episodes) {
    slot.resize(static_cast<std::size_t>(cfg.replicates));
  }

  const std::int64_t total_jobs =
      static_cast<std::int64_t>(num_policies) * cfg.replicates;
  const int workers = std::max(
      1, std::min<int>(parallel, static_cast<int>(std::min<std::int64_t>(
                                     total_jobs, 256))));
  std::atomic<std::int64_t> next_job{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  const auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t job = next_job.fetch_add(1);
      if (job >= total_jobs) {
        return;
      }
      const int policy_index = static_cast<int>(job / cfg.replicates);
      const std::int64_t replicate = job % cfg.replicates;
      try {
        EpisodeResult episode =
            run_episode(cfg, policy_index, replicate, sink != nullptr);
        if (sink != nullptr) {
          (*sink)(cfg.policies[static_cast<std::size_t>(policy_index)].label,
                  replicate, episode.trace);
          episode.trace.clear();
          episode.trace.shrink_to_fit();
        }
        result.episodes[static_cast<std::size_t>(policy_index)]
                       [static_cast<std::size_t>(replicate)] =
            std::move(episode);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          try {
            throw;
          } catch (const std::exception& e) {
            first_error = std::make_exception_ptr(
                Error("policy " + std::to_string(policy_index) +
                      ", replicate " + std::to_string(replicate) + ": " +
                      e.what()));
          } catch (...) {
            first_error = std::current_exception();
          }
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (std::thread& thread : pool) {
      thread.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
    for (int p = 0; p < num_policies; ++p) {
      const auto& episodes = result.episodes[static_cast<std::size_t>(p)];
      std::vector<double> regrets;
      regrets.reserve(episodes.size());
      double total = 0.0;
      int switched = 0;
      for (const EpisodeResult& episode : episodes) {
        const double regret = episode.checkpoint_regret[c];
        regrets.push_back(regret);
        total += regret;
        if (episode.switch_round >= 1 &&
            episode.switch_round <= cfg.checkpoints[c]) {
          ++switched;
        }
      }
      AggregateRow row;
      row.checkpoint = cfg.checkpoints[c];
      row.policy = cfg.policies[static_cast<std::size_t>(p)].label;
      row.mean_regret = total / static_cast<double>(regrets.size());
      row.median = quantile(regrets, 0.5);
      row.p90 = quantile(regrets, 0.9);
      row.exp3p_start_freq =
          static_cast<double>(switched) / static_cast<double>(episodes.size());
      envelopes[static_cast<std::size_t>(p)].evaluate(
          cfg.checkpoints[c], &row.envelope, &row.capped_envelope);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string aggregate_csv_text(const std::vector<AggregateRow>& rows) {
  std::string out =
      "checkpoint,policy,mean_regret,median,p90,exp3p_start_freq,envelope,"
      "capped_envelope\n";
  for (const AggregateRow& row : rows) {
    out += std::to_string(row.checkpoint);
    out += ',';
    out += row.policy;
    out += ',';
    out += format_double17(row.mean_regret);
    out += ',';
    out += format_double17(row.median);
    out += ',';
    out += format_double17(row.p90);
    out += ',';
    out += format_double17(row.exp3p_start_freq);
    out += ',';
    out += format_double17(row.envelope);
    out += ',';
    out += format_double17(row.capped_envelope);
    out += '\n';
  }
  return out;
}

std::string manifest_text(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.finalize();
  const std::string normalized = normalize_config(cfg);
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(normalized)));
  std::string out;
  out += "# version = ";
  out += kArtifactVersion;
  out += "\n# config_hash = ";
  out += hash_hex;
  out += "\n# seed = " + std::to_string(cfg.seed) + "\n\n";
  out += normalized;
  return out;
}

void write_text_atomically(const std::string& text, const std::string& path) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  const std::filesystem::path temp(path + ".tmp");
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw Error("cannot open '" + temp.string() + "' for writing");
    }
    stream << text;
    stream.flush();
    if (!stream) {
      throw Error("failed writing '" + temp.string() + "'");
    }
  }
  std::filesystem::rename(temp, target);
}

}  // namespace sao
