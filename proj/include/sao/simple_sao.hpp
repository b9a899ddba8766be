#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "sao/arm_statistics.hpp"
#include "sao/policies.hpp"

namespace sao {

// Two-arm best-of-both-worlds policy built from three phases.
//
// Exploration: both arms are played with probability 1/2.  The phase ends at
// the first round t with t > exploration_floor and
//   |estimated_avg(0) - estimated_avg(1)| >= 24 C / sqrt(t),
// which freezes tau_star = t and names the arm with the larger estimated
// average the leader (ties to the lower index).
//
// Exploitation: at round t the non-leader is played with probability
// tau_star / (2t).  After each round two consistency checks run in order:
//   gap check:   8 C / sqrt(tau_star) <= lead - other <= 40 C / sqrt(tau_star)
//                on the estimated averages;
//   anchor check: |estimated - realized| <= 6 C / sqrt(t) for the leader and
//                <= 6 C / sqrt(tau_star) for the other arm (an arm with no
//                plays yet is skipped).
// The first failed check switches the policy to an adversarial fallback for
// the remaining rounds.
//
// C defaults to 12 ln(horizon); the exploration floor to 8 C^2.  Both are
// configurable because the defaults make desk-scale horizons sit in
// exploration forever.
class SimpleSaoPolicy : public Policy {
 public:
  struct Options {
    // Threshold constant C; <= 0 selects the default 12 ln(horizon).
    double c_crn = 0.0;
    // Exploration floor = multiplier * C^2.
    double exploration_floor_multiplier = 8.0;
    // Confidence for the adversarial fallback; <= 0 selects 1/horizon.
    double fallback_delta = 0.0;
  };

  SimpleSaoPolicy(std::int64_t horizon, const Options& options);

  int num_arms() const override { return 2; }
  std::string_view name() const override { return "simple-sao"; }
  int select(std::int64_t t, Rng& rng) override;
  const std::vector<double>& probabilities() const override { return p_; }
  void observe(std::int64_t t, int arm, double reward) override;
  Phase phase() const override { return phase_; }
  FiredTest last_fired() const override { return fired_; }

  double c_crn() const { return c_; }
  double exploration_floor() const { return floor_; }
  // Round the exploration phase ended, or -1 while still exploring.
  std::int64_t tau_star() const { return tau_star_; }
  // Arm exploited after exploration, or -1 while still exploring.
  int leader() const { return leader_; }
  // Round whose checks started the adversarial fallback, or -1.
  std::int64_t switch_round() const { return switch_round_; }
  const ArmStatistics& statistics() const { return stats_; }

 private:
  void run_checks(std::int64_t t);

  std::int64_t horizon_;
  double c_;
  double floor_;
  double fallback_delta_;
  std::int64_t rounds_ = 0;
  std::int64_t tau_star_ = -1;
  int leader_ = -1;
  std::int64_t switch_round_ = -1;
  Phase phase_ = Phase::kExploration;
  FiredTest fired_ = FiredTest::kNone;
  ArmStatistics stats_;
  std::vector<double> p_;
  std::unique_ptr<Exp3PPolicy> fallback_;
};

}  // namespace sao
