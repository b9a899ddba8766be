#include "sao/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "policy_guards.hpp"

namespace sao {

using detail::check_arity;
using detail::check_horizon;
using detail::check_observation;
using detail::check_observation_round;
using detail::check_round;

std::vector<double> mixed_softmax(const std::vector<double>& scores,
                                  double mix) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - top);
    total += p[i];
  }
  const double uniform = mix / static_cast<double>(scores.size());
  for (double& value : p) {
    value = (1.0 - mix) * (value / total) + uniform;
  }
  return p;
}

Ucb1Policy::Ucb1Policy(int num_arms, std::int64_t horizon)
    : horizon_(horizon),
      counts_(static_cast<std::size_t>(num_arms), 0),
      sums_(static_cast<std::size_t>(num_arms), 0.0),
      p_(static_cast<std::size_t>(num_arms), 0.0) {
  check_arity(num_arms);
  check_horizon(horizon);
}

int Ucb1Policy::select(std::int64_t t, Rng& rng) {
  (void)rng;  // deterministic policy
  check_round(t, rounds_, horizon_);
  const int k = num_arms();
  int choice = -1;
  if (t <= k) {
    choice = static_cast<int>(t - 1);
  } else {
    double best = -1.0;
    for (int i = 0; i < k; ++i) {
      const std::size_t ui = static_cast<std::size_t>(i);
      const double mean = sums_[ui] / static_cast<double>(counts_[ui]);
      const double width = std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                                     static_cast<double>(counts_[ui]));
      const double index = mean + width;
      if (index > best) {
        best = index;
        choice = i;
      }
    }
  }
  std::fill(p_.begin(), p_.end(), 0.0);
  p_[static_cast<std::size_t>(choice)] = 1.0;
  ++rounds_;
  return choice;
}

void Ucb1Policy::observe(std::int64_t t, int arm, double reward) {
  check_observation_round(t, rounds_);
  check_observation(arm, num_arms(), reward);
  ++counts_[static_cast<std::size_t>(arm)];
  sums_[static_cast<std::size_t>(arm)] += reward;
}

Exp3Policy::Exp3Policy(int num_arms, std::int64_t horizon)
    : horizon_(horizon),
      scores_(static_cast<std::size_t>(num_arms), 0.0),
      p_(static_cast<std::size_t>(num_arms), 0.0) {
  check_arity(num_arms);
  check_horizon(horizon);
  const double k = static_cast<double>(num_arms);
  const double n = static_cast<double>(horizon);
  gamma_ = std::min(
      1.0, std::sqrt(k * std::log(k) / ((std::numbers::e - 1.0) * n)));
  refresh_probabilities();
}

void Exp3Policy::refresh_probabilities() {
  p_ = mixed_softmax(scores_, gamma_);
}

int Exp3Policy::select(std::int64_t t, Rng& rng) {
  check_round(t, rounds_, horizon_);
  ++rounds_;
  return rng.pick(p_);
}

void Exp3Policy::observe(std::int64_t t, int arm, double reward) {
  check_observation_round(t, rounds_);
  check_observation(arm, num_arms(), reward);
  const std::size_t ui = static_cast<std::size_t>(arm);
  scores_[ui] += (gamma_ / static_cast<double>(num_arms())) * reward / p_[ui];
  refresh_probabilities();
}

Exp3PPolicy::Exp3PPolicy(int num_arms, std::int64_t horizon, double delta)
    : horizon_(horizon),
      scores_(static_cast<std::size_t>(num_arms), 0.0),
      p_(static_cast<std::size_t>(num_arms), 0.0) {
  check_arity(num_arms);
  check_horizon(horizon);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("confidence level must lie in (0, 1), got " +
                      std::to_string(delta));
  }
  const double k = static_cast<double>(num_arms);
  const double n = static_cast<double>(horizon);
  eta_ = 0.95 * std::sqrt(std::log(k) / (n * k));
  gamma_ = std::min(1.0, 1.05 * std::sqrt(k * std::log(k) / n));
  bias_ = std::min(1.0, std::sqrt(std::log(k / delta) / (n * k)));
  refresh_probabilities();
}

void Exp3PPolicy::refresh_probabilities() {
  p_ = mixed_softmax(scores_, gamma_);
}

int Exp3PPolicy::select(std::int64_t t, Rng& rng) {
  check_round(t, rounds_, horizon_);
  ++rounds_;
  return rng.pick(p_);
}

void Exp3PPolicy::observe(std::int64_t t, int arm, double reward) {
  check_observation_round(t, rounds_);
  check_observation(arm, num_arms(), reward);
  for (int i = 0; i < num_arms(); ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const double gain = (i == arm) ? reward : 0.0;
    scores_[ui] += eta_ * (gain + bias_) / p_[ui];
  }
  refresh_probabilities();
}

}  // namespace sao
