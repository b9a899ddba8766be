#include "sao/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sao/errors.hpp"
#include "sao/round_record.hpp"

namespace sao {
namespace {

const std::set<std::string> kEnvironmentKinds = {
    "stochastic",   "constant",      "hash",          "stochastic-then-flip",
    "gap-inflater",    "gap-collapser", "estimator-skewer"};

const std::set<std::string> kPolicyKinds = {"sao", "simple-sao", "ucb1",
                                            "exp3", "exp3p"};

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return parsed;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + value + "'");
  }
}

std::int64_t parse_int64(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const std::int64_t parsed = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return parsed;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_uint64(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t parsed = std::stoull(value, &used);
    if (used != value.size() || value.empty() || value[0] == '-') {
      throw std::invalid_argument("not a non-negative integer");
    }
    return parsed;
  } catch (const std::exception&) {
    fail(line, "expected a non-negative integer, got '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.push_back(parse_double(trim(item), line));
  }
  if (out.empty()) {
    fail(line, "expected a comma-separated list of numbers");
  }
  return out;
}

std::vector<std::int64_t> parse_int64_list(const std::string& value,
                                           int line) {
  std::vector<std::int64_t> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.push_back(parse_int64(trim(item), line));
  }
  if (out.empty()) {
    fail(line, "expected a comma-separated list of integers");
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += format_double17(values[i]);
  }
  return out;
}

void check_mean_list(const std::vector<double>& values,
                     const std::string& key) {
  for (double value : values) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ConfigError(key + " entries must lie in [0, 1]");
    }
  }
}

}  // namespace

int EnvironmentSpec::arms() const {
  if (kind == "hash") {
    if (num_arms < 2) {
      throw ConfigError("hash environment needs num_arms >= 2");
    }
    return num_arms;
  }
  if (kind == "constant") {
    if (constants.size() < 2) {
      throw ConfigError("constant environment needs at least 2 constants");
    }
    return static_cast<int>(constants.size());
  }
  if (means.size() < 2) {
    throw ConfigError(kind + " environment needs at least 2 means");
  }
  return static_cast<int>(means.size());
}

std::vector<std::int64_t> default_checkpoints(std::int64_t horizon) {
  std::vector<std::int64_t> points;
  std::int64_t value = horizon;
  while (value > 1) {
    points.push_back(value);
    value = (value + 1) / 2;
  }
  points.push_back(1);
  std::reverse(points.begin(), points.end());
  return points;
}

void ExperimentConfig::finalize() {
  if (horizon < 1) {
    throw ConfigError("horizon must be positive");
  }
  if (replicates < 1) {
    throw ConfigError("replicates must be positive");
  }
  const int num_arms = environment.arms();
  if (num_arms < 2 || horizon < num_arms) {
    throw ConfigError("experiment requires horizon >= num_arms >= 2 (got "
                      "horizon " +
                      std::to_string(horizon) + ", " +
                      std::to_string(num_arms) + " arms)");
  }

  if (kEnvironmentKinds.count(environment.kind) == 0) {
    throw ConfigError("unknown environment kind '" + environment.kind + "'");
  }
  check_mean_list(environment.means, "means");
  check_mean_list(environment.constants, "constants");
  check_mean_list(environment.means_after, "means_after");
  check_mean_list(environment.boosted_means, "boosted_means");
  check_mean_list(environment.final_means, "final_means");

  const bool scheduled = environment.kind == "stochastic-then-flip" ||
                         environment.kind == "gap-inflater" ||
                         environment.kind == "gap-collapser" ||
                         environment.kind == "estimator-skewer";
  if (scheduled && environment.switch_round < 1) {
    throw ConfigError(environment.kind + " environment needs switch_round "
                      ">= 1");
  }
  const auto check_arity_match = [&](const std::vector<double>& list,
                                     const std::string& key, bool required) {
    if (list.empty()) {
      if (required) {
        throw ConfigError(environment.kind + " environment needs " + key);
      }
      return;
    }
    if (list.size() != environment.means.size()) {
      throw ConfigError(key + " must list one mean per arm");
    }
  };
  if (environment.kind == "stochastic-then-flip") {
    check_arity_match(environment.means_after, "means_after", true);
  }
  if (environment.kind == "gap-inflater") {
    check_arity_match(environment.means_after, "means_after", false);
  }
  if (environment.kind == "gap-collapser" &&
      !(environment.collapse_fraction >= 0.0 &&
        environment.collapse_fraction <= 1.0)) {
    throw ConfigError("collapse_fraction must lie in [0, 1]");
  }
  if (environment.kind == "estimator-skewer") {
    if (environment.second_switch_round <= environment.switch_round) {
      throw ConfigError("estimator-skewer needs second_switch_round > "
                        "switch_round");
    }
    check_arity_match(environment.boosted_means, "boosted_means", false);
    check_arity_match(environment.final_means, "final_means", false);
  }

  if (checkpoints.empty()) {
    checkpoints = default_checkpoints(horizon);
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon) {
      throw ConfigError("checkpoints must lie in [1, horizon]");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw ConfigError("checkpoints must be strictly increasing");
    }
  }

  if (policies.empty()) {
    throw ConfigError("at least one [policy] section is required");
  }
  std::set<std::string> labels;
  for (PolicySpec& policy : policies) {
    if (kPolicyKinds.count(policy.kind) == 0) {
      throw ConfigError("unknown policy kind '" + policy.kind + "'");
    }
    if (policy.label.empty()) {
      policy.label = policy.kind;
    }
    if (!labels.insert(policy.label).second) {
      throw ConfigError("duplicate policy label '" + policy.label +
                        "'; set label = ... to disambiguate");
    }
    if (policy.beta_mode != "n4" && policy.beta_mode != "high-prob" &&
        policy.beta_mode != "fixed") {
      throw ConfigError("beta_mode must be n4, high-prob, or fixed");
    }
    if (policy.beta_mode == "fixed" && !(policy.beta_value > 1.0)) {
      throw ConfigError("beta_mode = fixed requires beta_value > 1");
    }
    if (!(policy.delta > 0.0 && policy.delta < 1.0)) {
      throw ConfigError("delta must lie in (0, 1)");
    }
    if (policy.test_set != "live" && policy.test_set != "snapshot") {
      throw ConfigError("test_set must be live or snapshot");
    }
    if (!(policy.ccrn_multiplier > 0.0)) {
      throw ConfigError("ccrn_multiplier must be positive");
    }
    if (!(policy.exploration_floor_multiplier >= 0.0)) {
      throw ConfigError("exploration_floor_multiplier must be non-negative");
    }
    if (policy.kind == "simple-sao" && num_arms != 2) {
      throw ConfigError("simple-sao supports exactly 2 arms, got " +
                        std::to_string(num_arms));
    }
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  bool saw_experiment = false;
  bool saw_environment = false;

  enum class Section { kNone, kExperiment, kEnvironment, kPolicy };
  Section section = Section::kNone;
  std::set<std::string> seen_keys;

  std::stringstream stream(text);
  std::string raw;
  int line_number = 0;
  while (std::getline(stream, raw)) {
    ++line_number;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(line_number, "malformed section header '" + line + "'");
      }
      const std::string name = line.substr(1, line.size() - 2);
      seen_keys.clear();
      if (name == "experiment") {
        if (saw_experiment) {
          fail(line_number, "duplicate [experiment] section");
        }
        saw_experiment = true;
        section = Section::kExperiment;
      } else if (name == "environment") {
        if (saw_environment) {
          fail(line_number, "duplicate [environment] section");
        }
        saw_environment = true;
        section = Section::kEnvironment;
      } else if (name == "policy") {
        config.policies.emplace_back();
        section = Section::kPolicy;
      } else {
        fail(line_number, "unknown section [" + name + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_number, "expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail(line_number, "empty key");
    }
    if (!seen_keys.insert(key).second) {
      fail(line_number, "duplicate key '" + key + "' in section");
    }

    switch (section) {
      case Section::kNone:
        fail(line_number, "key '" + key + "' outside any section");
      case Section::kExperiment:
        if (key == "horizon") {
          config.horizon = parse_int64(value, line_number);
        } else if (key == "replicates") {
          const std::int64_t parsed = parse_int64(value, line_number);
          if (parsed < 1 || parsed > 1000000) {
            fail(line_number, "replicates out of range");
          }
          config.replicates = static_cast<int>(parsed);
        } else if (key == "seed") {
          config.seed = parse_uint64(value, line_number);
        } else if (key == "checkpoints") {
          config.checkpoints = parse_int64_list(value, line_number);
        } else {
          fail(line_number, "unknown [experiment] key '" + key + "'");
        }
        break;
      case Section::kEnvironment: {
        EnvironmentSpec& env = config.environment;
        if (key == "kind") {
          env.kind = value;
        } else if (key == "means") {
          env.means = parse_double_list(value, line_number);
        } else if (key == "constants") {
          env.constants = parse_double_list(value, line_number);
        } else if (key == "num_arms") {
          const std::int64_t parsed = parse_int64(value, line_number);
          if (parsed < 2 || parsed > 1000) {
            fail(line_number, "num_arms out of range");
          }
          env.num_arms = static_cast<int>(parsed);
        } else if (key == "hash_seed") {
          env.hash_seed = parse_uint64(value, line_number);
        } else if (key == "switch_round") {
          env.switch_round = parse_int64(value, line_number);
        } else if (key == "second_switch_round") {
          env.second_switch_round = parse_int64(value, line_number);
        } else if (key == "means_after") {
          env.means_after = parse_double_list(value, line_number);
        } else if (key == "boosted_means") {
          env.boosted_means = parse_double_list(value, line_number);
        } else if (key == "final_means") {
          env.final_means = parse_double_list(value, line_number);
        } else if (key == "collapse_fraction") {
          env.collapse_fraction = parse_double(value, line_number);
        } else {
          fail(line_number, "unknown [environment] key '" + key + "'");
        }
        break;
      }
      case Section::kPolicy: {
        PolicySpec& policy = config.policies.back();
        if (key == "kind") {
          policy.kind = value;
        } else if (key == "label") {
          policy.label = value;
        } else if (key == "beta_mode") {
          policy.beta_mode = value;
        } else if (key == "beta_value") {
          policy.beta_value = parse_double(value, line_number);
        } else if (key == "delta") {
          policy.delta = parse_double(value, line_number);
        } else if (key == "test_set") {
          policy.test_set = value;
        } else if (key == "ccrn_multiplier") {
          policy.ccrn_multiplier = parse_double(value, line_number);
        } else if (key == "exploration_floor_multiplier") {
          policy.exploration_floor_multiplier =
              parse_double(value, line_number);
        } else {
          fail(line_number, "unknown [policy] key '" + key + "'");
        }
        break;
      }
    }
  }

  config.finalize();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << stream.rdbuf();
  return parse_config_text(buffer.str());
}

std::string normalize_config(const ExperimentConfig& config) {
  std::string out;
  out += "[experiment]\n";
  out += "horizon = " + std::to_string(config.horizon) + "\n";
  out += "replicates = " + std::to_string(config.replicates) + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  out += "checkpoints = ";
  for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(config.checkpoints[i]);
  }
  out += "\n\n[environment]\n";
  const EnvironmentSpec& env = config.environment;
  out += "kind = " + env.kind + "\n";
  if (env.kind == "hash") {
    out += "num_arms = " + std::to_string(env.num_arms) + "\n";
    out += "hash_seed = " + std::to_string(env.hash_seed) + "\n";
  } else if (env.kind == "constant") {
    out += "constants = " + join_doubles(env.constants) + "\n";
  } else {
    out += "means = " + join_doubles(env.means) + "\n";
  }
  if (env.kind == "stochastic-then-flip" || env.kind == "gap-inflater" ||
      env.kind == "gap-collapser" || env.kind == "estimator-skewer") {
    out += "switch_round = " + std::to_string(env.switch_round) + "\n";
  }
  if (env.kind == "stochastic-then-flip" ||
      (env.kind == "gap-inflater" && !env.means_after.empty())) {
    out += "means_after = " + join_doubles(env.means_after) + "\n";
  }
  if (env.kind == "gap-collapser") {
    out += "collapse_fraction = " + format_double17(env.collapse_fraction) +
           "\n";
  }
  if (env.kind == "estimator-skewer") {
    out += "second_switch_round = " +
           std::to_string(env.second_switch_round) + "\n";
    if (!env.boosted_means.empty()) {
      out += "boosted_means = " + join_doubles(env.boosted_means) + "\n";
    }
    if (!env.final_means.empty()) {
      out += "final_means = " + join_doubles(env.final_means) + "\n";
    }
  }
  for (const PolicySpec& policy : config.policies) {
    out += "\n[policy]\n";
    out += "kind = " + policy.kind + "\n";
    out += "label = " + policy.label + "\n";
    if (policy.kind == "sao") {
      out += "beta_mode = " + policy.beta_mode + "\n";
      if (policy.beta_mode == "fixed") {
        out += "beta_value = " + format_double17(policy.beta_value) + "\n";
      }
      if (policy.beta_mode == "high-prob") {
        out += "delta = " + format_double17(policy.delta) + "\n";
      }
      out += "test_set = " + policy.test_set + "\n";
    } else if (policy.kind == "simple-sao") {
      out += "ccrn_multiplier = " + format_double17(policy.ccrn_multiplier) +
             "\n";
      out += "exploration_floor_multiplier = " +
             format_double17(policy.exploration_floor_multiplier) + "\n";
      out += "delta = " + format_double17(policy.delta) + "\n";
    } else if (policy.kind == "exp3p") {
      out += "delta = " + format_double17(policy.delta) + "\n";
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace sao
