#include "sao/simple_sao.hpp"

#include <algorithm>
#include <cmath>

#include "policy_guards.hpp"

namespace sao {

using detail::check_horizon;
using detail::check_observation;
using detail::check_observation_round;
using detail::check_round;

SimpleSaoPolicy::SimpleSaoPolicy(std::int64_t horizon, const Options& options)
    : horizon_(horizon), stats_(2), p_(2, 0.5) {
  check_horizon(horizon);
  c_ = options.c_crn > 0.0
           ? options.c_crn
           : 12.0 * std::log(static_cast<double>(horizon));
  if (!(c_ > 0.0)) {
    throw ConfigError("threshold constant must be positive");
  }
  if (!(options.exploration_floor_multiplier >= 0.0)) {
    throw ConfigError("exploration floor multiplier must be non-negative");
  }
  floor_ = options.exploration_floor_multiplier * c_ * c_;
  fallback_delta_ = options.fallback_delta > 0.0
                        ? options.fallback_delta
                        : 1.0 / static_cast<double>(horizon);
  if (!(fallback_delta_ < 1.0)) {
    throw ConfigError("fallback confidence must lie in (0, 1)");
  }
}

int SimpleSaoPolicy::select(std::int64_t t, Rng& rng) {
  check_round(t, rounds_, horizon_);
  ++rounds_;
  fired_ = FiredTest::kNone;
  if (fallback_) {
    phase_ = Phase::kAdversarial;
    const int arm = fallback_->select(t - switch_round_, rng);
    p_ = fallback_->probabilities();
    return arm;
  }
  if (tau_star_ < 0) {
    phase_ = Phase::kExploration;
    p_[0] = 0.5;
    p_[1] = 0.5;
  } else {
    phase_ = Phase::kExploitation;
    const double other_prob = static_cast<double>(tau_star_) /
                              (2.0 * static_cast<double>(t));
    p_[static_cast<std::size_t>(1 - leader_)] = other_prob;
    p_[static_cast<std::size_t>(leader_)] = 1.0 - other_prob;
  }
  return rng.pick(p_);
}

void SimpleSaoPolicy::observe(std::int64_t t, int arm, double reward) {
  check_observation_round(t, rounds_);
  check_observation(arm, num_arms(), reward);
  if (fallback_) {
    fallback_->observe(t - switch_round_, arm, reward);
    return;
  }
  stats_.record(arm, reward, p_[static_cast<std::size_t>(arm)]);
  run_checks(t);
}

void SimpleSaoPolicy::run_checks(std::int64_t t) {
  const double root_t = std::sqrt(static_cast<double>(t));
  if (tau_star_ < 0) {
    const double gap =
        std::abs(stats_.estimated_average(0) - stats_.estimated_average(1));
    if (static_cast<double>(t) > floor_ && gap >= 24.0 * c_ / root_t) {
      tau_star_ = t;
      leader_ = stats_.estimated_average(0) >= stats_.estimated_average(1)
                    ? 0
                    : 1;
      fired_ = FiredTest::kExplorationExit1;
    }
    return;
  }

  const int other = 1 - leader_;
  const double root_tau = std::sqrt(static_cast<double>(tau_star_));
  const double gap =
      stats_.estimated_average(leader_) - stats_.estimated_average(other);
  FiredTest violation = FiredTest::kNone;
  if (gap < 8.0 * c_ / root_tau || gap > 40.0 * c_ / root_tau) {
    violation = FiredTest::kCond2;
  } else {
    const bool leader_off =
        stats_.plays(leader_) > 0 &&
        std::abs(stats_.estimated_average(leader_) -
                 stats_.realized_average(leader_)) > 6.0 * c_ / root_t;
    const bool other_off =
        stats_.plays(other) > 0 &&
        std::abs(stats_.estimated_average(other) -
                 stats_.realized_average(other)) > 6.0 * c_ / root_tau;
    if (leader_off || other_off) {
      violation = FiredTest::kCond3;
    }
  }
  if (violation != FiredTest::kNone) {
    fired_ = violation;
    switch_round_ = t;
    fallback_ = std::make_unique<Exp3PPolicy>(
        2, std::max<std::int64_t>(1, horizon_ - t), fallback_delta_);
  }
}

}  // namespace sao
