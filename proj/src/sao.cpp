#include "sao/sao.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "policy_guards.hpp"

namespace sao {

using detail::check_arity;
using detail::check_horizon;
using detail::check_observation;
using detail::check_observation_round;
using detail::check_round;

namespace {

void check_threshold_args(int num_arms, double log_beta) {
  if (num_arms < 2) {
    throw OutOfDomainError("threshold needs at least 2 arms");
  }
  if (!(log_beta > 0.0)) {
    throw OutOfDomainError("threshold needs log(beta) > 0");
  }
}

}  // namespace

double sao_gap_radical(int num_arms, double log_beta, double rounds) {
  check_threshold_args(num_arms, log_beta);
  if (!(rounds >= 1.0)) {
    throw OutOfDomainError("gap radical needs at least one round");
  }
  const double u = static_cast<double>(num_arms) * log_beta / rounds;
  return std::sqrt(4.0 * u + 5.0 * u * u);
}

double sao_deactivation_threshold(int num_arms, double log_beta,
                                  std::int64_t t) {
  return 6.0 * sao_gap_radical(num_arms, log_beta, static_cast<double>(t));
}

double sao_estimate_consistency_threshold(int num_arms, double log_beta,
                                          std::int64_t t, std::int64_t plays,
                                          std::int64_t tau,
                                          double frozen_prob) {
  check_threshold_args(num_arms, log_beta);
  if (t < 1 || plays < 1) {
    throw OutOfDomainError("estimate consistency threshold needs t >= 1 and "
                           "at least one play");
  }
  const double anchor = std::sqrt(2.0 * log_beta / static_cast<double>(plays));
  if (tau < 0 || tau >= t) {
    return anchor + sao_gap_radical(num_arms, log_beta,
                                    static_cast<double>(t));
  }
  if (!(frozen_prob > 0.0)) {
    throw OutOfDomainError("deactivated arm needs a positive frozen "
                           "probability");
  }
  const double td = static_cast<double>(t);
  const double ts = static_cast<double>(tau);
  const double k = static_cast<double>(num_arms);
  const double inner =
      k * ts / (td * td) + (td - ts) / (frozen_prob * ts * td);
  const double tail = k * log_beta / ts;
  return anchor + std::sqrt(4.0 * inner * log_beta + 5.0 * tail * tail);
}

double sao_gap_growth_threshold(int num_arms, double log_beta,
                                std::int64_t tau) {
  if (tau < 2) {
    throw OutOfDomainError("gap growth threshold needs tau >= 2");
  }
  return 10.0 * sao_gap_radical(num_arms, log_beta,
                                static_cast<double>(tau - 1));
}

double sao_gap_floor_threshold(int num_arms, double log_beta,
                               std::int64_t tau) {
  if (tau < 1) {
    throw OutOfDomainError("gap floor threshold needs tau >= 1");
  }
  return 2.0 * sao_gap_radical(num_arms, log_beta, static_cast<double>(tau));
}

SaoPolicy::SaoPolicy(int num_arms, std::int64_t horizon,
                     const Options& options)
    : horizon_(horizon),
      snapshot_tests_(options.snapshot_tests),
      active_(static_cast<std::size_t>(num_arms), true),
      tau_(static_cast<std::size_t>(num_arms), -1),
      frozen_(static_cast<std::size_t>(num_arms), 0.0),
      stats_(num_arms),
      p_(static_cast<std::size_t>(num_arms), 0.0) {
  check_arity(num_arms);
  check_horizon(horizon);
  const double k = static_cast<double>(num_arms);
  const double n = static_cast<double>(horizon);
  switch (options.beta_mode) {
    case BetaMode::kN4:
      beta_ = n * n * n * n;
      log_beta_ = 4.0 * std::log(n);
      break;
    case BetaMode::kHighProb:
      if (!(options.delta > 0.0 && options.delta < 1.0)) {
        throw ConfigError("confidence level must lie in (0, 1), got " +
                          std::to_string(options.delta));
      }
      beta_ = 10.0 * k * n * n * n / options.delta;
      log_beta_ = std::log(10.0 * k / options.delta) + 3.0 * std::log(n);
      break;
    case BetaMode::kFixed:
      if (!(options.beta_value > 1.0)) {
        throw ConfigError("fixed beta must exceed 1, got " +
                          std::to_string(options.beta_value));
      }
      beta_ = options.beta_value;
      log_beta_ = std::log(options.beta_value);
      break;
  }
  fallback_delta_ = std::min(0.5, k / beta_);
}

bool SaoPolicy::is_active(int arm) const {
  return active_.at(static_cast<std::size_t>(arm));
}

int SaoPolicy::active_count() const {
  return static_cast<int>(std::count(active_.begin(), active_.end(), true));
}

std::int64_t SaoPolicy::deactivation_round(int arm) const {
  return tau_.at(static_cast<std::size_t>(arm));
}

double SaoPolicy::frozen_probability(int arm) const {
  return frozen_.at(static_cast<std::size_t>(arm));
}

int SaoPolicy::select(std::int64_t t, Rng& rng) {
  check_round(t, rounds_, horizon_);
  ++rounds_;
  fired_ = FiredTest::kNone;
  if (fallback_) {
    phase_ = Phase::kAdversarial;
    const int arm = fallback_->select(t - switch_round_, rng);
    p_ = fallback_->probabilities();
    return arm;
  }
  phase_ = Phase::kInterleaved;
  const int k = num_arms();
  double off_mass = 0.0;
  int live = 0;
  for (int i = 0; i < k; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (active_[ui]) {
      ++live;
    } else {
      p_[ui] = frozen_[ui] * static_cast<double>(tau_[ui]) /
               static_cast<double>(t);
      off_mass += p_[ui];
    }
  }
  const double share = (1.0 - off_mass) / static_cast<double>(live);
  for (int i = 0; i < k; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (active_[ui]) {
      p_[ui] = share;
    }
  }
  check_invariants(t);
  return rng.pick(p_);
}

void SaoPolicy::observe(std::int64_t t, int arm, double reward) {
  check_observation_round(t, rounds_);
  check_observation(arm, num_arms(), reward);
  if (fallback_) {
    fallback_->observe(t - switch_round_, arm, reward);
    return;
  }
  stats_.record(arm, reward, p_[static_cast<std::size_t>(arm)]);
  run_tests(t);
}

void SaoPolicy::run_tests(std::int64_t t) {
  const int k = num_arms();
  const double L = log_beta_;
  std::vector<double> est(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    est[static_cast<std::size_t>(i)] = stats_.estimated_average(i);
  }
  const auto max_over = [&](const std::vector<bool>& members) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      const std::size_t ui = static_cast<std::size_t>(i);
      if (members[ui] && est[ui] > best) {
        best = est[ui];
      }
    }
    return best;
  };

  const std::vector<bool> entry_active = active_;
  const double entry_max = max_over(entry_active);
  double live_max = entry_max;
  const double deactivation_bar = sao_deactivation_threshold(k, L, t);
  bool deactivated_any = false;

  for (int i = 0; i < k; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (active_[ui] && live_max - est[ui] > deactivation_bar) {
      active_[ui] = false;
      tau_[ui] = t;
      frozen_[ui] = p_[ui];
      deactivated_any = true;
      live_max = max_over(active_);
    }

    if (stats_.plays(i) > 0) {
      const double deviation = std::abs(est[ui] - stats_.realized_average(i));
      if (deviation > sao_estimate_consistency_threshold(
                          k, L, t, stats_.plays(i), tau_[ui], frozen_[ui])) {
        start_fallback(FiredTest::kConsistency8, t);
        return;
      }
    }

    const bool test_inactive =
        snapshot_tests_ ? !entry_active[ui] : !active_[ui];
    if (test_inactive) {
      const double gap = (snapshot_tests_ ? entry_max : live_max) - est[ui];
      if (tau_[ui] >= 2 &&
          gap > sao_gap_growth_threshold(k, L, tau_[ui])) {
        start_fallback(FiredTest::kConsistency9, t);
        return;
      }
      if (gap <= sao_gap_floor_threshold(k, L, tau_[ui])) {
        start_fallback(FiredTest::kConsistency10, t);
        return;
      }
    }
  }
  if (deactivated_any) {
    fired_ = FiredTest::kDeactivate7;
  }
}

void SaoPolicy::start_fallback(FiredTest test, std::int64_t t) {
  fired_ = test;
  switch_test_ = test;
  switch_round_ = t;
  fallback_ = std::make_unique<Exp3PPolicy>(
      num_arms(), std::max<std::int64_t>(1, horizon_ - t), fallback_delta_);
}

void SaoPolicy::check_invariants(std::int64_t t) const {
  const int k = num_arms();
  const double active_floor = 1.0 / static_cast<double>(k);
  double frozen_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (active_[ui]) {
      if (!(p_[ui] >= active_floor)) {
        throw InvariantViolationError(
            "active arm " + std::to_string(i) + " below the 1/K floor at " +
            "round " + std::to_string(t));
      }
    } else {
      frozen_sum += frozen_[ui];
    }
  }
  if (!(frozen_sum <= 1.0 + std::log(static_cast<double>(k)))) {
    throw InvariantViolationError(
        "frozen probabilities exceed 1 + log K at round " + std::to_string(t));
  }
  if (!is_simplex(p_)) {
    throw InvariantViolationError("probabilities left the simplex at round " +
                                  std::to_string(t));
  }
}

}  // namespace sao
