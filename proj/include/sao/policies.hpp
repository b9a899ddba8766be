#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sao/errors.hpp"
#include "sao/rng.hpp"
#include "sao/round_record.hpp"

namespace sao {

// A bandit policy.  Per round the harness calls select(t, rng) (which fixes
// the selection probabilities and samples an arm), reads probabilities(),
// reveals the chosen arm's reward through observe(), then reads phase() and
// last_fired() for the trace.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int num_arms() const = 0;
  virtual std::string_view name() const = 0;
  // Samples the arm for round t (1-based, consecutive).  Throws
  // HorizonExceededError past the configured horizon.
  virtual int select(std::int64_t t, Rng& rng) = 0;
  // Probability vector used by the latest select(); a simplex.
  virtual const std::vector<double>& probabilities() const = 0;
  virtual void observe(std::int64_t t, int arm, double reward) = 0;
  // Phase the latest round was played in.
  virtual Phase phase() const = 0;
  // Test that fired at the end of the latest round, if any.
  virtual FiredTest last_fired() const { return FiredTest::kNone; }
};

// Deterministic optimism: play each arm once in index order, then the arm
// maximizing  mean_i + sqrt(2 ln t / plays_i),  ties to the lowest index.
// The probability vector is the one-hot of the chosen arm.
class Ucb1Policy : public Policy {
 public:
  Ucb1Policy(int num_arms, std::int64_t horizon);
  int num_arms() const override { return static_cast<int>(counts_.size()); }
  std::string_view name() const override { return "ucb1"; }
  int select(std::int64_t t, Rng& rng) override;
  const std::vector<double>& probabilities() const override { return p_; }
  void observe(std::int64_t t, int arm, double reward) override;
  Phase phase() const override { return Phase::kBaseline; }

 private:
  std::int64_t horizon_;
  std::int64_t rounds_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  std::vector<double> p_;
};

// Exponential weights with uniform mixing.  Scores grow by
// (gamma/K) * reward/p on the played arm only;
//   p_i = (1-gamma) softmax(scores)_i + gamma/K,
//   gamma = min(1, sqrt(K ln K / ((e-1) n))).
class Exp3Policy : public Policy {
 public:
  Exp3Policy(int num_arms, std::int64_t horizon);
  int num_arms() const override { return static_cast<int>(scores_.size()); }
  std::string_view name() const override { return "exp3"; }
  int select(std::int64_t t, Rng& rng) override;
  const std::vector<double>& probabilities() const override { return p_; }
  void observe(std::int64_t t, int arm, double reward) override;
  Phase phase() const override { return Phase::kBaseline; }
  double gamma() const { return gamma_; }

 private:
  void refresh_probabilities();

  std::int64_t horizon_;
  std::int64_t rounds_ = 0;
  double gamma_;
  std::vector<double> scores_;
  std::vector<double> p_;
};

// Exponential weights with uniform mixing and an optimistic bias, tuned for a
// high-probability guarantee at confidence delta over horizon n:
//   estimate_i = (reward * [i == chosen] + bias) / p_i   for every arm,
//   scores_i += eta * estimate_i,
//   p_i = (1-gamma) softmax(scores)_i + gamma/K,
// with eta  = 0.95 sqrt(ln K / (n K)),
//      gamma = min(1, 1.05 sqrt(K ln K / n)),
//      bias = min(1, sqrt(ln(K/delta) / (n K))).
// Against any reward sequence the regret stays within
// 5.15 sqrt(n K ln(K/delta)) with probability at least 1 - delta.
class Exp3PPolicy : public Policy {
 public:
  Exp3PPolicy(int num_arms, std::int64_t horizon, double delta);
  int num_arms() const override { return static_cast<int>(scores_.size()); }
  std::string_view name() const override { return "exp3p"; }
  int select(std::int64_t t, Rng& rng) override;
  const std::vector<double>& probabilities() const override { return p_; }
  void observe(std::int64_t t, int arm, double reward) override;
  Phase phase() const override { return Phase::kBaseline; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  double bias() const { return bias_; }

 private:
  void refresh_probabilities();

  std::int64_t horizon_;
  std::int64_t rounds_ = 0;
  double gamma_, eta_, bias_;
  std::vector<double> scores_;
  std::vector<double> p_;
};

// (1-mix) * softmax(scores) + mix/K, computed with max-subtraction so scores
// may grow without bound.
std::vector<double> mixed_softmax(const std::vector<double>& scores,
                                  double mix);

}  // namespace sao
