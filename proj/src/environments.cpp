#include "sao/environments.hpp"

#include <algorithm>
#include <cmath>

namespace sao {
namespace {

void check_means(const std::vector<double>& means, const char* who) {
  if (means.size() < 2) {
    throw ConfigError(std::string(who) + ": need at least two arms");
  }
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ConfigError(std::string(who) + ": means must lie in [0,1]");
    }
  }
}

int best_arm(const std::vector<double>& means) {
  return static_cast<int>(std::max_element(means.begin(), means.end()) -
                          means.begin());
}

int worst_arm(const std::vector<double>& means) {
  return static_cast<int>(std::min_element(means.begin(), means.end()) -
                          means.begin());
}

}  // namespace

std::vector<double> draw_round(RewardProcess& env, std::int64_t t,
                               const PlayHistory& history, Rng& rng) {
  if (t < 1) throw Error("draw_round: rounds are 1-based");
  if (history.rounds() != t - 1) {
    throw Error("draw_round: history must cover exactly rounds 1..t-1");
  }
  std::vector<double> rewards = env.draw(t, history, rng);
  if (static_cast<int>(rewards.size()) != env.num_arms()) {
    throw InvalidRewardError("draw_round: reward vector has wrong arity");
  }
  for (double g : rewards) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw InvalidRewardError(
          "draw_round: reward outside [0,1] (rewards are not clamped)");
    }
  }
  return rewards;
}

void DiscreteDistribution::validate() const {
  if (values.empty() || values.size() != weights.size()) {
    throw ConfigError("DiscreteDistribution: values/weights size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw ConfigError("DiscreteDistribution: support must lie in [0,1]");
    }
    if (!(weights[i] >= 0.0)) {
      throw ConfigError("DiscreteDistribution: weights must be >= 0");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("DiscreteDistribution: weights must sum to 1");
  }
}

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * weights[i];
  return m;
}

double DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.next_unit();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cum += weights[i];
    if (u < cum) return values[i];
  }
  return values[last_positive];
}

StochasticEnvironment StochasticEnvironment::bernoulli(
    std::vector<double> means) {
  check_means(means, "StochasticEnvironment");
  StochasticEnvironment env;
  env.means_ = means;
  env.bernoulli_means_ = std::move(means);
  return env;
}

StochasticEnvironment::StochasticEnvironment(
    std::vector<DiscreteDistribution> arms) {
  if (arms.size() < 2) {
    throw ConfigError("StochasticEnvironment: need at least two arms");
  }
  for (const auto& arm : arms) {
    arm.validate();
    means_.push_back(arm.mean());
  }
  supports_ = std::move(arms);
}

int StochasticEnvironment::num_arms() const {
  return static_cast<int>(means_.size());
}

std::vector<double> StochasticEnvironment::draw(std::int64_t,
                                                const PlayHistory&, Rng& rng) {
  std::vector<double> rewards(means_.size());
  if (supports_.empty()) {
    for (std::size_t i = 0; i < bernoulli_means_.size(); ++i) {
      rewards[i] = rng.bernoulli(bernoulli_means_[i]) ? 1.0 : 0.0;
    }
  } else {
    for (std::size_t i = 0; i < supports_.size(); ++i) {
      rewards[i] = supports_[i].sample(rng);
    }
  }
  return rewards;
}

std::optional<std::vector<double>> StochasticEnvironment::means() const {
  return means_;
}

double StochasticEnvironment::minimal_gap() const {
  const double best = *std::max_element(means_.begin(), means_.end());
  double gap = 0.0;
  bool seen_suboptimal = false;
  for (double m : means_) {
    if (m < best && (!seen_suboptimal || best - m < gap)) {
      gap = best - m;
      seen_suboptimal = true;
    }
  }
  return seen_suboptimal ? gap : 0.0;
}

ConstantAdversary::ConstantAdversary(std::vector<double> constants)
    : constants_(std::move(constants)) {
  check_means(constants_, "ConstantAdversary");
}

int ConstantAdversary::num_arms() const {
  return static_cast<int>(constants_.size());
}

std::vector<double> ConstantAdversary::draw(std::int64_t, const PlayHistory&,
                                            Rng&) {
  return constants_;
}

HashAdversary::HashAdversary(int num_arms, std::uint64_t seed)
    : num_arms_(num_arms), seed_(seed) {
  if (num_arms < 2) throw ConfigError("HashAdversary: need at least two arms");
}

int HashAdversary::num_arms() const { return num_arms_; }

std::vector<double> HashAdversary::draw(std::int64_t t, const PlayHistory&,
                                        Rng&) {
  std::vector<double> rewards(num_arms_);
  for (int i = 0; i < num_arms_; ++i) {
    rewards[i] = unit_hash(seed_, static_cast<std::uint64_t>(t),
                           static_cast<std::uint64_t>(i));
  }
  return rewards;
}

MatrixAdversary::MatrixAdversary(std::vector<std::vector<double>> rewards)
    : rewards_(std::move(rewards)) {
  if (rewards_.empty()) throw ConfigError("MatrixAdversary: empty matrix");
  const std::size_t arms = rewards_.front().size();
  if (arms < 2) throw ConfigError("MatrixAdversary: need at least two arms");
  for (const auto& row : rewards_) {
    if (row.size() != arms) {
      throw ConfigError("MatrixAdversary: ragged reward matrix");
    }
  }
}

int MatrixAdversary::num_arms() const {
  return static_cast<int>(rewards_.front().size());
}

std::vector<double> MatrixAdversary::draw(std::int64_t t, const PlayHistory&,
                                          Rng&) {
  if (t > rounds()) {
    throw HorizonExceededError("MatrixAdversary: round past stored matrix");
  }
  return rewards_[static_cast<std::size_t>(t - 1)];
}

ScheduledBernoulliAdversary::ScheduledBernoulliAdversary(int num_arms)
    : num_arms_(num_arms) {}

int ScheduledBernoulliAdversary::num_arms() const { return num_arms_; }

std::vector<double> ScheduledBernoulliAdversary::draw(std::int64_t t,
                                                      const PlayHistory&,
                                                      Rng& rng) {
  const std::vector<double> means = means_at(t);
  std::vector<double> rewards(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    rewards[i] = rng.bernoulli(means[i]) ? 1.0 : 0.0;
  }
  return rewards;
}

FlipAdversary::FlipAdversary(std::vector<double> means_before,
                             std::vector<double> means_after,
                             std::int64_t flip_round)
    : ScheduledBernoulliAdversary(static_cast<int>(means_before.size())),
      before_(std::move(means_before)),
      after_(std::move(means_after)),
      flip_round_(flip_round) {
  check_means(before_, "FlipAdversary");
  check_means(after_, "FlipAdversary");
  if (before_.size() != after_.size()) {
    throw ConfigError("FlipAdversary: mean vectors must have equal arity");
  }
  if (flip_round_ < 1) {
    throw ConfigError("FlipAdversary: flip round must be >= 1");
  }
}

std::vector<double> FlipAdversary::means_at(std::int64_t t) const {
  return t <= flip_round_ ? before_ : after_;
}

GapInflater::GapInflater(std::vector<double> base_means,
                         std::int64_t switch_round,
                         std::vector<double> inflated_means)
    : ScheduledBernoulliAdversary(static_cast<int>(base_means.size())),
      base_(std::move(base_means)),
      inflated_(std::move(inflated_means)),
      switch_round_(switch_round) {
  check_means(base_, "GapInflater");
  if (inflated_.empty()) {
    // Default inflation: the best arm saturates at 1 while every other arm
    // keeps its base mean.  Dropping the others instead would desynchronize
    // their importance-weighted and realized averages, which is the
    // estimator-skewer's job, not this adversary's.
    inflated_ = base_;
    inflated_[best_arm(base_)] = 1.0;
  }
  check_means(inflated_, "GapInflater");
  if (inflated_.size() != base_.size()) {
    throw ConfigError("GapInflater: mean vectors must have equal arity");
  }
  if (switch_round_ < 1) {
    throw ConfigError("GapInflater: switch round must be >= 1");
  }
}

std::vector<double> GapInflater::means_at(std::int64_t t) const {
  return t <= switch_round_ ? base_ : inflated_;
}

GapCollapser::GapCollapser(std::vector<double> base_means,
                           std::int64_t switch_round, double collapse_fraction)
    : ScheduledBernoulliAdversary(static_cast<int>(base_means.size())),
      base_(std::move(base_means)),
      switch_round_(switch_round),
      fraction_(collapse_fraction) {
  check_means(base_, "GapCollapser");
  if (switch_round_ < 1) {
    throw ConfigError("GapCollapser: switch round must be >= 1");
  }
  if (!(fraction_ >= 0.0 && fraction_ <= 1.0)) {
    throw ConfigError("GapCollapser: collapse fraction must be in [0,1]");
  }
  const double lo = *std::min_element(base_.begin(), base_.end());
  const double hi = *std::max_element(base_.begin(), base_.end());
  const double mid = (lo + hi) / 2.0;
  collapsed_ = base_;
  for (double& m : collapsed_) m = m + fraction_ * (mid - m);
}

std::vector<double> GapCollapser::means_at(std::int64_t t) const {
  return t <= switch_round_ ? base_ : collapsed_;
}

EstimatorSkewer::EstimatorSkewer(std::vector<double> base_means,
                                 std::int64_t switch_round,
                                 std::int64_t second_switch_round,
                                 std::vector<double> boosted_means,
                                 std::vector<double> final_means)
    : ScheduledBernoulliAdversary(static_cast<int>(base_means.size())),
      base_(std::move(base_means)),
      boosted_(std::move(boosted_means)),
      final_(std::move(final_means)),
      switch_round_(switch_round),
      second_switch_round_(second_switch_round) {
  check_means(base_, "EstimatorSkewer");
  if (boosted_.empty()) {
    // Default stage two: only the best arm is raised, widening the gap so
    // the later raise of the worst arm cannot shrink it below its window.
    boosted_ = base_;
    boosted_[best_arm(base_)] = 1.0;
  }
  if (final_.empty()) {
    // Default stage three: the worst arm pays like the best from now on.
    final_ = boosted_;
    final_[worst_arm(base_)] = 1.0;
  }
  check_means(boosted_, "EstimatorSkewer");
  check_means(final_, "EstimatorSkewer");
  if (boosted_.size() != base_.size() || final_.size() != base_.size()) {
    throw ConfigError("EstimatorSkewer: mean vectors must have equal arity");
  }
  if (switch_round_ < 1 || second_switch_round_ <= switch_round_) {
    throw ConfigError(
        "EstimatorSkewer: need 1 <= switch_round < second_switch_round");
  }
}

std::vector<double> EstimatorSkewer::means_at(std::int64_t t) const {
  if (t <= switch_round_) return base_;
  if (t <= second_switch_round_) return boosted_;
  return final_;
}

std::unique_ptr<RewardProcess> make_probe_adversary(std::string_view kind,
                                                    const ProbeParams& params) {
  if (kind == "stochastic-then-flip") {
    return std::make_unique<FlipAdversary>(params.means, params.means_after,
                                           params.switch_round);
  }
  if (kind == "gap-inflater") {
    return std::make_unique<GapInflater>(params.means, params.switch_round,
                                         params.means_after);
  }
  if (kind == "gap-collapser") {
    return std::make_unique<GapCollapser>(params.means, params.switch_round,
                                          params.collapse_fraction);
  }
  if (kind == "estimator-skewer") {
    return std::make_unique<EstimatorSkewer>(
        params.means, params.switch_round, params.second_switch_round,
        params.boosted_means, params.final_means);
  }
  throw ConfigError("unknown probe adversary kind '" + std::string(kind) +
                    "'");
}

}  // namespace sao
