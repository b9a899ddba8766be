#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "sao/arm_statistics.hpp"
#include "sao/policies.hpp"

namespace sao {

// Threshold scale shared by the gap tests below:
//   sqrt(4 K L / x + 5 (K L / x)^2)
// where L is the log confidence parameter and x a round count.  All gap
// thresholds are small multiples of this radical, so tests of the reductions
// between them can rely on bit-identical evaluation.
double sao_gap_radical(int num_arms, double log_beta, double rounds);

// Gap above which an active arm is deactivated: 6 * radical(t).
double sao_deactivation_threshold(int num_arms, double log_beta,
                                  std::int64_t t);

// Largest credible disagreement between the importance-weighted and the
// realized per-pull average of one arm:
//   sqrt(2 L / plays) + sqrt(4 (K t*/t^2 + (t - t*)/(q tau t)) L + 5 (K L / t*)^2)
// with t* = min(tau, t).  For an arm that is still active pass tau < 0 (or
// tau = t): the second radical then reduces exactly to radical(t).
// Requires plays >= 1.
double sao_estimate_consistency_threshold(int num_arms, double log_beta,
                                          std::int64_t t, std::int64_t plays,
                                          std::int64_t tau = -1,
                                          double frozen_prob = 0.0);

// Gap beyond which a deactivated arm looks *too* suboptimal for a stochastic
// world: 10 * radical(tau - 1).  Requires tau >= 2.
double sao_gap_growth_threshold(int num_arms, double log_beta,
                                std::int64_t tau);

// Gap at or below which a deactivated arm no longer looks suboptimal at all:
// 2 * radical(tau).  Requires tau >= 1.
double sao_gap_floor_threshold(int num_arms, double log_beta,
                               std::int64_t tau);

// Best-of-both-worlds policy for K >= 2 arms.
//
// While unswitched ("interleaved" phase), the policy keeps an active set A.
// At round t it plays deactivated arms with probability q_i tau_i / t (their
// probability frozen at deactivation, decaying), splits the remaining mass
// equally over A, and after observing the reward runs, per arm in increasing
// index: the deactivation test (gap of importance-weighted averages above
// sao_deactivation_threshold removes the arm from A, recording tau_i = t and
// q_i = p_i), then three switch tests —
//   estimate consistency: |estimated - realized average| above
//     sao_estimate_consistency_threshold (skipped while the arm is unplayed);
//   gap growth: a deactivated arm's gap above sao_gap_growth_threshold
//     (skipped while tau_i <= 1);
//   gap floor: a deactivated arm's gap at or below sao_gap_floor_threshold.
// The first switch test to fire anywhere in the sweep ends the sweep, records
// the round as switch_round, and hands every later round to a nested
// adversarial fallback sized for the remaining horizon ("adversarial" phase).
//
// The log confidence parameter L = log(beta) comes from beta_mode:
//   kN4:       beta = n^4 (expectation-mode default);
//   kHighProb: beta = 10 K n^3 / delta;
//   kFixed:    beta = beta_value (experiment mode; must exceed 1).
class SaoPolicy : public Policy {
 public:
  enum class BetaMode { kN4, kHighProb, kFixed };

  struct Options {
    BetaMode beta_mode = BetaMode::kN4;
    // Confidence for kHighProb mode.
    double delta = 0.05;
    // Value for kFixed mode; must exceed 1.
    double beta_value = 0.0;
    // When true, the gap growth/floor tests evaluate membership and the
    // active-set maximum against the round-start active set instead of the
    // live one (deactivation itself always applies immediately).
    bool snapshot_tests = false;
  };

  SaoPolicy(int num_arms, std::int64_t horizon, const Options& options);

  int num_arms() const override { return static_cast<int>(active_.size()); }
  std::string_view name() const override { return "sao"; }
  int select(std::int64_t t, Rng& rng) override;
  const std::vector<double>& probabilities() const override { return p_; }
  void observe(std::int64_t t, int arm, double reward) override;
  Phase phase() const override { return phase_; }
  FiredTest last_fired() const override { return fired_; }

  double beta() const { return beta_; }
  double log_beta() const { return log_beta_; }
  // Round whose tests started the adversarial fallback, or -1.
  std::int64_t switch_round() const { return switch_round_; }
  // The switch test that fired, or kNone while unswitched.
  FiredTest switch_test() const { return switch_test_; }
  bool is_active(int arm) const;
  int active_count() const;
  // Deactivation round tau_i, or -1 while the arm is active.
  std::int64_t deactivation_round(int arm) const;
  // Frozen probability q_i; meaningful only for deactivated arms.
  double frozen_probability(int arm) const;
  const ArmStatistics& statistics() const { return stats_; }
  const Exp3PPolicy* fallback() const { return fallback_.get(); }

 private:
  void run_tests(std::int64_t t);
  void start_fallback(FiredTest test, std::int64_t t);
  void check_invariants(std::int64_t t) const;

  std::int64_t horizon_;
  double beta_;
  double log_beta_;
  double fallback_delta_;
  bool snapshot_tests_;
  std::int64_t rounds_ = 0;
  std::int64_t switch_round_ = -1;
  FiredTest switch_test_ = FiredTest::kNone;
  Phase phase_ = Phase::kInterleaved;
  FiredTest fired_ = FiredTest::kNone;
  std::vector<bool> active_;
  std::vector<std::int64_t> tau_;    // deactivation rounds, -1 if active
  std::vector<double> frozen_;       // q_i, 0 if active
  ArmStatistics stats_;
  std::vector<double> p_;
  std::unique_ptr<Exp3PPolicy> fallback_;
};

}  // namespace sao
