#pragma once

#include <cstdint>

namespace sao {

// High-probability pseudo-regret ceiling for the best-of-both-worlds policy
// on a stochastic instance with minimal gap `gap`:
//   260 K (1 + log K) log^2(beta) / gap.
// Requires gap > 0.
double stochastic_regret_envelope(int num_arms, double log_beta, double gap);

// High-probability adversarial-regret ceiling over n rounds:
//   60 (1 + log K)(1 + log n) sqrt(n K log(beta) + 5 K^2 log^2(beta))
//     + 200 K^2 log^2(beta).
double adversarial_regret_envelope(int num_arms, std::int64_t n,
                                   double log_beta);

// High-probability regret ceiling for the adversarial fallback run alone:
//   5.15 sqrt(n K log(K / delta)).
double exp3p_regret_envelope(std::int64_t n, int num_arms, double delta);

}  // namespace sao
