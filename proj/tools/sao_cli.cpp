// Command-line front end for the bandit simulation library: run or compare
// experiments from config files, validate the concentration bounds
// empirically, and replay emitted traces for bit-exact verification.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sao/concentration.hpp"
#include "sao/config.hpp"
#include "sao/errors.hpp"
#include "sao/harness.hpp"
#include "sao/rng.hpp"
#include "sao/round_record.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEnvelope = 3;

struct GlobalOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int parallel = 1;
  bool emit_traces = false;
  bool strict = false;
};

sao::ExperimentConfig load(const std::string& path,
                           const GlobalOptions& options) {
  sao::ExperimentConfig config = sao::load_config_file(path);
  if (options.seed_set) {
    config.seed = options.seed;
  }
  return config;
}

int run_experiment(const std::string& config_path,
                   const GlobalOptions& options, bool require_comparison) {
  sao::ExperimentConfig config = load(config_path, options);
  if (require_comparison && config.policies.size() < 2) {
    throw sao::ConfigError("compare needs at least 2 [policy] sections");
  }

  sao::TraceSink sink = [&](const std::string& label, std::int64_t replicate,
                            const std::vector<sao::RoundRecord>& trace) {
    const std::string path = options.out_dir + "/trace_" + label + "_r" +
                             std::to_string(replicate) + ".csv";
    std::ostringstream text;
    sao::write_trace_csv(text, trace);
    sao::write_text_atomically(text.str(), path);
  };

  const sao::MonteCarloResult result = sao::run_monte_carlo(
      config, options.parallel, options.emit_traces ? &sink : nullptr);

  sao::write_text_atomically(sao::aggregate_csv_text(result.rows),
                             options.out_dir + "/aggregate.csv");
  sao::write_text_atomically(sao::manifest_text(config),
                             options.out_dir + "/manifest.ini");
  std::cout << "wrote " << options.out_dir << "/aggregate.csv and manifest.ini"
            << " (" << config.policies.size() << " policies, "
            << config.replicates << " replicates)\n";

  if (options.strict) {
    const std::int64_t final_checkpoint = config.checkpoints.back();
    bool violated = false;
    for (const sao::AggregateRow& row : result.rows) {
      if (row.checkpoint != final_checkpoint ||
          std::isnan(row.capped_envelope)) {
        continue;
      }
      if (row.mean_regret > row.capped_envelope) {
        std::cerr << "strict: policy " << row.policy << " mean regret "
                  << row.mean_regret << " exceeds its envelope cap "
                  << row.capped_envelope << " at checkpoint "
                  << row.checkpoint << "\n";
        violated = true;
      }
    }
    if (violated) {
      return kExitEnvelope;
    }
  }
  return kExitOk;
}

int replay_trace(const std::string& trace_path, const std::string& config_path,
                 const GlobalOptions& options, int policy_index,
                 std::int64_t replicate) {
  const sao::ExperimentConfig config = load(config_path, options);
  std::ifstream trace_file(trace_path);
  if (!trace_file) {
    throw sao::TraceError("cannot open trace file: " + trace_path);
  }
  const std::vector<sao::RoundRecord> recorded =
      sao::read_trace_csv(trace_file);
  const sao::EpisodeResult episode =
      sao::run_episode(config, policy_index, replicate, true);
  if (recorded.size() != episode.trace.size()) {
    std::cerr << "trace mismatch: file has " << recorded.size()
              << " rounds, recomputation has " << episode.trace.size()
              << "\n";
    return kExitFailure;
  }
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    if (!(recorded[i] == episode.trace[i])) {
      std::cerr << "trace mismatch at round " << recorded[i].t << "\n";
      return kExitFailure;
    }
  }
  std::cout << "trace verified (" << recorded.size() << " rounds match)\n";
  return kExitOk;
}

int validate_bounds(const GlobalOptions& options, std::int64_t trials) {
  const std::uint64_t seed = options.seed_set ? options.seed : 1;
  std::string csv = "bound,params,theoretical,empirical,trials\n";
  bool all_within = true;
  const std::vector<sao::BoundCheck> checks = sao::builtin_bound_checks();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const sao::BoundCheck& check = checks[i];
    sao::Rng rng(sao::derive_seed(seed, sao::kValidationStream,
                                  static_cast<std::uint64_t>(i)));
    const double rate =
        sao::empirical_violation_rate(check.spec, check.sampler, trials, rng);
    const double theoretical = check.spec.failure_probability();
    const double slack =
        3.0 * std::sqrt(theoretical * (1.0 - theoretical) /
                        static_cast<double>(trials));
    const bool within = rate <= theoretical + slack;
    all_within = all_within && within;
    csv += check.name + "," + check.spec.params_string() + "," +
           sao::format_double17(theoretical) + "," +
           sao::format_double17(rate) + "," + std::to_string(trials) + "\n";
    std::cout << (within ? "ok   " : "FAIL ") << check.name
              << ": empirical " << rate << " vs bound " << theoretical
              << " (+" << slack << " slack)\n";
  }
  sao::write_text_atomically(csv, options.out_dir + "/bounds.csv");
  std::cout << "wrote " << options.out_dir << "/bounds.csv\n";
  return all_within ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-and-adversarial multi-armed bandit simulator"};
  app.set_version_flag("--version", std::string(sao::kArtifactVersion));
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--out", options.out_dir, "Output directory")
      ->envname("SAO_OUT")
      ->capture_default_str();
  auto* seed_option =
      app.add_option("--seed", options.seed, "Master seed override");
  app.add_option("--parallel", options.parallel,
                 "Worker threads for replicates")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_flag("--emit-traces", options.emit_traces,
               "Write one trace CSV per (policy, replicate)");
  app.add_flag("--strict", options.strict,
               "Fail with exit 3 when mean regret exceeds the envelope cap");

  std::string config_path;
  std::string trace_path;
  std::int64_t trials = 100000;
  int policy_index = 0;
  std::int64_t replicate = 0;

  CLI::App* run = app.add_subcommand("run", "Run the configured experiment");
  run->add_option("config", config_path, "Config file")->required();

  CLI::App* compare =
      app.add_subcommand("compare", "Run a multi-policy comparison");
  compare->add_option("config", config_path, "Config file")->required();

  CLI::App* validate = app.add_subcommand(
      "validate-bounds", "Estimate violation rates of the built-in bounds");
  validate->add_option("--trials", trials, "Monte Carlo trials per bound")
      ->check(CLI::Range(static_cast<std::int64_t>(1),
                         static_cast<std::int64_t>(100000000)))
      ->capture_default_str();

  CLI::App* replay =
      app.add_subcommand("replay", "Recompute an emitted trace and compare");
  replay->add_option("trace", trace_path, "Trace CSV file")->required();
  replay->add_option("config", config_path, "Config file")->required();
  replay->add_option("--policy-index", policy_index,
                     "Policy position in the config")
      ->capture_default_str();
  replay->add_option("--replicate", replicate, "Replicate index")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  options.seed_set = seed_option->count() > 0;

  try {
    if (run->parsed()) {
      return run_experiment(config_path, options, false);
    }
    if (compare->parsed()) {
      return run_experiment(config_path, options, true);
    }
    if (validate->parsed()) {
      return validate_bounds(options, trials);
    }
    if (replay->parsed()) {
      return replay_trace(trace_path, config_path, options, policy_index,
                          replicate);
    }
  } catch (const sao::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
