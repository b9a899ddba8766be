#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sao/errors.hpp"
#include "sao/rng.hpp"

namespace sao {

// Play history visible to an adaptive reward process when it sets round t:
// the arms chosen and the full reward vectors of rounds 1..t-1.  The current
// round's choice is never visible — rewards and the policy's draw are
// simultaneous, which the harness enforces by calling the environment first.
struct PlayHistory {
  std::vector<int> plays;
  std::vector<std::vector<double>> rewards;

  std::int64_t rounds() const {
    return static_cast<std::int64_t>(plays.size());
  }
  void push(int arm, std::vector<double> reward_vector) {
    plays.push_back(arm);
    rewards.push_back(std::move(reward_vector));
  }
};

// A reward process: stochastic, fixed-in-advance, or adaptive.  Instances
// hold per-episode state only; build a fresh one per episode.
class RewardProcess {
 public:
  virtual ~RewardProcess() = default;
  virtual int num_arms() const = 0;
  virtual std::string_view kind() const = 0;
  // Full reward vector for round t (1-based) given history through t-1.
  virtual std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                                   Rng& rng) = 0;
  // Stationary per-arm means, when the process has them (stochastic only).
  virtual std::optional<std::vector<double>> means() const {
    return std::nullopt;
  }
};

// Wrapper the harness uses: checks that the history length matches t-1 and
// that every produced reward lies in [0,1] (adversary outputs are never
// clamped; out-of-range values are an error).
std::vector<double> draw_round(RewardProcess& env, std::int64_t t,
                               const PlayHistory& history, Rng& rng);

// One arm's reward distribution on a finite support inside [0,1].
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> weights;

  void validate() const;
  double mean() const;
  double sample(Rng& rng) const;  // inverse-CDF walk
};

// I.i.d. per-arm rewards: Bernoulli(mu_i) or general finite support.
class StochasticEnvironment : public RewardProcess {
 public:
  static StochasticEnvironment bernoulli(std::vector<double> means);
  explicit StochasticEnvironment(std::vector<DiscreteDistribution> arms);

  int num_arms() const override;
  std::string_view kind() const override { return "stochastic"; }
  std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                           Rng& rng) override;
  std::optional<std::vector<double>> means() const override;

  // Gap between the best mean and the best of the rest; 0 if all tie.
  double minimal_gap() const;

 private:
  StochasticEnvironment() = default;
  std::vector<double> bernoulli_means_;        // used when supports_ empty
  std::vector<DiscreteDistribution> supports_;
  std::vector<double> means_;
};

// Fixed rewards g_{i,t} = c_i for all rounds.
class ConstantAdversary : public RewardProcess {
 public:
  explicit ConstantAdversary(std::vector<double> constants);
  int num_arms() const override;
  std::string_view kind() const override { return "oblivious-constant"; }
  std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                           Rng& rng) override;

 private:
  std::vector<double> constants_;
};

// Oblivious table materialized lazily: g_{i,t} = unit_hash(seed, t, i).
// Depends only on (seed, t, i), so two runs with the same seed see the same
// table no matter what either policy does.
class HashAdversary : public RewardProcess {
 public:
  HashAdversary(int num_arms, std::uint64_t seed);
  int num_arms() const override;
  std::string_view kind() const override { return "oblivious-hash"; }
  std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                           Rng& rng) override;
  std::uint64_t seed() const { return seed_; }

 private:
  int num_arms_;
  std::uint64_t seed_;
};

// Oblivious rewards from an explicit rounds x arms matrix.
class MatrixAdversary : public RewardProcess {
 public:
  explicit MatrixAdversary(std::vector<std::vector<double>> rewards);
  int num_arms() const override;
  std::string_view kind() const override { return "oblivious-matrix"; }
  std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                           Rng& rng) override;
  std::int64_t rounds() const {
    return static_cast<std::int64_t>(rewards_.size());
  }

 private:
  std::vector<std::vector<double>> rewards_;
};

// ---------------------------------------------------------------------------
// Probe adversaries: Bernoulli draws whose means follow a round schedule
// designed to stress one specific runtime test of the switching policies.
// They receive the play history (and may use it) but these constructions are
// schedule-driven.

struct ProbeParams {
  std::vector<double> means;         // phase-one means (all probes)
  std::vector<double> means_after;   // post-switch means (flip, inflater)
  std::int64_t switch_round = 0;     // first schedule change (required)
  std::int64_t second_switch_round = 0;  // skewer only
  double collapse_fraction = 1.0;        // collapser only, in [0,1]
  std::vector<double> boosted_means;     // skewer stage two (optional)
  std::vector<double> final_means;       // skewer stage three (optional)
};

// Bernoulli rewards with time-varying means; subclasses define the schedule.
class ScheduledBernoulliAdversary : public RewardProcess {
 public:
  int num_arms() const override;
  std::vector<double> draw(std::int64_t t, const PlayHistory& history,
                           Rng& rng) override;
  // The mean vector in force at round t; exposed for tests and oracles.
  virtual std::vector<double> means_at(std::int64_t t) const = 0;

 protected:
  explicit ScheduledBernoulliAdversary(int num_arms);

 private:
  int num_arms_;
};

// I.i.d. with means_before until flip_round, then i.i.d. with means_after.
class FlipAdversary : public ScheduledBernoulliAdversary {
 public:
  FlipAdversary(std::vector<double> means_before,
                std::vector<double> means_after, std::int64_t flip_round);
  std::string_view kind() const override { return "stochastic-then-flip"; }
  std::vector<double> means_at(std::int64_t t) const override;

 private:
  std::vector<double> before_, after_;
  std::int64_t flip_round_;
};

// Looks stochastic until switch_round, then drives the apparent gap upward
// (best arm to ~1, worst to ~0 by default) so a frozen suboptimal arm looks
// far worse than it did at its deactivation.
class GapInflater : public ScheduledBernoulliAdversary {
 public:
  GapInflater(std::vector<double> base_means, std::int64_t switch_round,
              std::vector<double> inflated_means);
  std::string_view kind() const override { return "gap-inflater"; }
  std::vector<double> means_at(std::int64_t t) const override;

 private:
  std::vector<double> base_, inflated_;
  std::int64_t switch_round_;
};

// Looks stochastic until switch_round, then pulls every mean toward the
// midpoint by collapse_fraction (0 = unchanged, 1 = full collapse), so a
// frozen suboptimal arm stops looking suboptimal.
class GapCollapser : public ScheduledBernoulliAdversary {
 public:
  GapCollapser(std::vector<double> base_means, std::int64_t switch_round,
               double collapse_fraction);
  std::string_view kind() const override { return "gap-collapser"; }
  std::vector<double> means_at(std::int64_t t) const override;
  double collapse_fraction() const { return fraction_; }

 private:
  std::vector<double> base_, collapsed_;
  std::int64_t switch_round_;
  double fraction_;
};

// Three-stage schedule that decouples the per-round and per-play averages of
// the worst arm while keeping the apparent gap inside its admissible window:
// stage one is stochastic, stage two raises the best arm, stage three raises
// the worst arm once its plays have become rare.
class EstimatorSkewer : public ScheduledBernoulliAdversary {
 public:
  EstimatorSkewer(std::vector<double> base_means, std::int64_t switch_round,
                  std::int64_t second_switch_round,
                  std::vector<double> boosted_means,
                  std::vector<double> final_means);
  std::string_view kind() const override { return "estimator-skewer"; }
  std::vector<double> means_at(std::int64_t t) const override;

 private:
  std::vector<double> base_, boosted_, final_;
  std::int64_t switch_round_, second_switch_round_;
};

// Factory over the probe kinds above; unknown kinds raise ConfigError.
// Kinds: "stochastic-then-flip", "gap-inflater", "gap-collapser",
// "estimator-skewer".
std::unique_ptr<RewardProcess> make_probe_adversary(std::string_view kind,
                                                    const ProbeParams& params);

}  // namespace sao
