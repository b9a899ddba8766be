#pragma once

#include <cstdint>
#include <vector>

#include "sao/errors.hpp"

namespace sao {

// Per-arm running tallies over a bandit episode.
//
// For each arm i the class tracks
//   plays(i)          number of rounds arm i was chosen,
//   realized_sum(i)   sum of rewards observed from arm i,
//   estimated_sum(i)  sum of importance-weighted rewards reward/prob, where
//                     prob is the probability the arm was selected with.
// The importance-weighted per-round increment has expectation equal to the
// true reward of the arm at that round, whatever the other arms pay.
class ArmStatistics {
 public:
  explicit ArmStatistics(int num_arms)
      : plays_(check_arms(num_arms), 0),
        realized_(num_arms, 0.0),
        estimated_(num_arms, 0.0) {}

  // Records one played round.  `prob` must be the probability the policy
  // assigned to `arm` this round.
  void record(int arm, double reward, double prob) {
    require_arm(arm);
    if (!(prob > 0.0)) {
      throw InvalidProbabilityError(
          "record: selection probability must be positive");
    }
    if (!(reward >= 0.0 && reward <= 1.0)) {
      throw InvalidRewardError("record: reward outside [0,1]");
    }
    ++t_;
    ++plays_[arm];
    realized_[arm] += reward;
    estimated_[arm] += reward / prob;
  }

  int num_arms() const { return static_cast<int>(plays_.size()); }
  std::int64_t round_count() const { return t_; }

  std::int64_t plays(int arm) const {
    require_arm(arm);
    return plays_[arm];
  }
  double realized_sum(int arm) const {
    require_arm(arm);
    return realized_[arm];
  }
  double estimated_sum(int arm) const {
    require_arm(arm);
    return estimated_[arm];
  }

  // Importance-weighted per-round average: estimated_sum / rounds.
  double estimated_average(int arm) const {
    require_arm(arm);
    if (t_ < 1) {
      throw UndefinedAverageError(
          "estimated_average: no rounds recorded yet");
    }
    return estimated_[arm] / static_cast<double>(t_);
  }

  // Realized per-play average: realized_sum / plays.
  double realized_average(int arm) const {
    require_arm(arm);
    if (plays_[arm] < 1) {
      throw UndefinedAverageError(
          "realized_average: arm has never been played");
    }
    return realized_[arm] / static_cast<double>(plays_[arm]);
  }

 private:
  static int check_arms(int num_arms) {
    if (num_arms < 1) throw Error("ArmStatistics: need at least one arm");
    return num_arms;
  }
  void require_arm(int arm) const {
    if (arm < 0 || arm >= num_arms()) {
      throw Error("ArmStatistics: arm index out of range");
    }
  }

  std::int64_t t_ = 0;
  std::vector<std::int64_t> plays_;
  std::vector<double> realized_;
  std::vector<double> estimated_;
};

}  // namespace sao
