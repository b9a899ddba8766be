#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sao/errors.hpp"

namespace sao {

// Accumulates the two regret notions over an episode.
//
//   adversarial_regret = max_i G_i - collected, where G_i is the cumulative
//     reward arm i would have paid a fixed-arm player (from the full reward
//     vectors), and collected is the policy's realized total.  May be
//     negative: a policy can beat every fixed arm on non-stationary rewards.
//
//   pseudo_regret = t * max_i mu_i - sum over rounds of mu_{chosen}.  Only
//     defined when stationary per-arm means are known; always >= 0.
class RegretLedger {
 public:
  RegretLedger(int num_arms, std::optional<std::vector<double>> means)
      : benchmark_(num_arms, 0.0), means_(std::move(means)) {
    if (num_arms < 1) throw Error("RegretLedger: need at least one arm");
    if (means_ && static_cast<int>(means_->size()) != num_arms) {
      throw ModelMismatchError("RegretLedger: means size != arm count");
    }
  }

  void on_round(std::span<const double> reward_vector, int chosen) {
    if (static_cast<int>(reward_vector.size()) != num_arms()) {
      throw Error("RegretLedger: reward vector size != arm count");
    }
    if (chosen < 0 || chosen >= num_arms()) {
      throw Error("RegretLedger: chosen arm out of range");
    }
    ++t_;
    for (int i = 0; i < num_arms(); ++i) benchmark_[i] += reward_vector[i];
    collected_ += reward_vector[chosen];
    if (means_) mean_collected_ += (*means_)[chosen];
  }

  int num_arms() const { return static_cast<int>(benchmark_.size()); }
  std::int64_t rounds() const { return t_; }
  double collected() const { return collected_; }
  double benchmark_sum(int arm) const { return benchmark_.at(arm); }
  bool has_means() const { return means_.has_value(); }

  double adversarial_regret() const {
    return *std::max_element(benchmark_.begin(), benchmark_.end()) -
           collected_;
  }

  double pseudo_regret() const {
    if (!means_) {
      throw ModelMismatchError(
          "pseudo_regret: per-arm means are not defined for this run");
    }
    const double best = *std::max_element(means_->begin(), means_->end());
    return static_cast<double>(t_) * best - mean_collected_;
  }

 private:
  std::int64_t t_ = 0;
  double collected_ = 0.0;
  double mean_collected_ = 0.0;
  std::vector<double> benchmark_;
  std::optional<std::vector<double>> means_;
};

}  // namespace sao
