#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sao/errors.hpp"
#include "sao/rng.hpp"

namespace sao {

// Deviation radii for the concentration inequalities the simulator relies on.
// Each radius R pairs with a failure probability: the deviation exceeds R
// with probability at most the stated bound.

// Poisson-style bound for a sum of independent [0,1] variables with mean mu:
//   P[|X - mu| > C * max(1, sqrt(mu))] < 2 * exp(-C / 3),   requires C > 1.
double chernoff_radius(double mu, double c);
double chernoff_failure_bound(double c);

// One-sided martingale bound for differences X_t in ranges of width c_t:
//   P[sum X_t > sqrt(log(1/delta) / 2 * sum c_t^2)] <= delta.
double hoeffding_azuma_radius(std::span<const double> ranges, double delta);

// One-sided Bernstein-style martingale bound with |X_t| <= b and predictable
// variance at most V:
//   sum X_t <= sqrt(2 V log(1/delta)) + b log(1/delta) / 3
// unless the realized predictable variance exceeds V; failure prob <= delta.
double bernstein_radius(double variance_bound, double b, double delta);

// Union-over-time variant used by the policy's per-round tests, stated with
// the log term passed directly:
//   sqrt(4 V L + 5 b^2 L^2).
double bernstein_union_radius_log(double variance, double b, double log_term);

// Same radius with L = log(n / delta); holds simultaneously for all prefixes
// of an n-round martingale with failure probability <= delta.
double bernstein_union_radius(double variance, double b, std::int64_t n,
                              double delta);

// ---------------------------------------------------------------------------
// Empirical validation: sample a process many times and measure how often the
// realized deviation exceeds the radius.

enum class BoundKind {
  kChernoff,
  kHoeffdingAzuma,
  kBernsteinMartingale,
  kBernsteinUnion,
};

struct BoundSpec {
  BoundKind kind = BoundKind::kChernoff;
  std::int64_t n = 1;          // sequence length
  double delta = 0.05;         // confidence (martingale bounds)
  double chernoff_c = 2.0;     // C parameter (chernoff)
  double b = 1.0;              // per-step range bound (bernstein)
  double variance_bound = 0.0; // V (bernstein-martingale)
  std::vector<double> step_ranges;  // c_t (hoeffding-azuma)

  void validate() const;
  double failure_probability() const;
  std::string kind_name() const;
  std::string params_string() const;
};

// One sampled realization of the process under test.
//   values                the sequence X_1..X_n (raw values for chernoff,
//                         martingale differences otherwise)
//   mean                  expected sum (chernoff only)
//   predictable_variance  sum of conditional variances (martingale bounds)
struct SampleSequence {
  std::vector<double> values;
  double mean = 0.0;
  double predictable_variance = 0.0;
};

using SequenceSampler = std::function<SampleSequence(Rng&)>;

// Runs `trials` independent samples and returns the fraction whose deviation
// exceeds the bound's radius.  Checks the bound's hypotheses on every sample
// and throws HypothesisViolationError when the sampler breaks them.
double empirical_violation_rate(const BoundSpec& bound,
                                const SequenceSampler& sampler,
                                std::int64_t trials, Rng& rng);

// Sum of n i.i.d. Bernoulli(p) draws; for the chernoff validator.
SequenceSampler bernoulli_sum_sampler(std::int64_t n, double p);

// Bounded martingale differences X_t = B_t - q_t with B_t ~ Bernoulli(q_t)
// and q_t a function of the running sum's sign, so the sequence is genuinely
// non-i.i.d.; |X_t| < 1 and conditional variance q_t(1-q_t).
SequenceSampler feedback_walk_sampler(std::int64_t n);

// A named, ready-to-run validation case.
struct BoundCheck {
  std::string name;
  BoundSpec spec;
  SequenceSampler sampler;
};

// The suite exercised by the command-line `validate-bounds` mode.
std::vector<BoundCheck> builtin_bound_checks();

}  // namespace sao
