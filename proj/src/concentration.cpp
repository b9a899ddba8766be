#include "sao/concentration.hpp"

#include <cmath>
#include <sstream>

namespace sao {

double chernoff_radius(double mu, double c) {
  if (!(mu >= 0.0)) throw OutOfDomainError("chernoff_radius: mu must be >= 0");
  if (!(c > 1.0)) throw OutOfDomainError("chernoff_radius: requires C > 1");
  return c * std::max(1.0, std::sqrt(mu));
}

double chernoff_failure_bound(double c) {
  if (!(c > 1.0)) {
    throw OutOfDomainError("chernoff_failure_bound: requires C > 1");
  }
  return 2.0 * std::exp(-c / 3.0);
}

double hoeffding_azuma_radius(std::span<const double> ranges, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfDomainError("hoeffding_azuma_radius: delta must be in (0,1)");
  }
  double sum_sq = 0.0;
  for (double c : ranges) {
    if (!(c > 0.0)) {
      throw OutOfDomainError(
          "hoeffding_azuma_radius: step ranges must be positive");
    }
    sum_sq += c * c;
  }
  return std::sqrt(std::log(1.0 / delta) / 2.0 * sum_sq);
}

double bernstein_radius(double variance_bound, double b, double delta) {
  if (!(variance_bound >= 0.0)) {
    throw OutOfDomainError("bernstein_radius: variance bound must be >= 0");
  }
  if (!(b > 0.0)) throw OutOfDomainError("bernstein_radius: b must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfDomainError("bernstein_radius: delta must be in (0,1)");
  }
  const double log_term = std::log(1.0 / delta);
  return std::sqrt(2.0 * variance_bound * log_term) + b * log_term / 3.0;
}

double bernstein_union_radius_log(double variance, double b, double log_term) {
  if (!(variance >= 0.0)) {
    throw OutOfDomainError("bernstein_union_radius: variance must be >= 0");
  }
  if (!(b >= 0.0)) {
    throw OutOfDomainError("bernstein_union_radius: b must be >= 0");
  }
  if (!(log_term > 0.0)) {
    throw OutOfDomainError("bernstein_union_radius: log term must be > 0");
  }
  return std::sqrt(4.0 * variance * log_term +
                   5.0 * b * b * log_term * log_term);
}

double bernstein_union_radius(double variance, double b, std::int64_t n,
                              double delta) {
  if (n < 1) throw OutOfDomainError("bernstein_union_radius: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfDomainError("bernstein_union_radius: delta must be in (0,1)");
  }
  return bernstein_union_radius_log(
      variance, b, std::log(static_cast<double>(n) / delta));
}

void BoundSpec::validate() const {
  if (n < 1) throw OutOfDomainError("BoundSpec: n must be >= 1");
  switch (kind) {
    case BoundKind::kChernoff:
      if (!(chernoff_c > 1.0)) {
        throw OutOfDomainError("BoundSpec: chernoff requires C > 1");
      }
      break;
    case BoundKind::kHoeffdingAzuma:
      if (!(delta > 0.0 && delta < 1.0)) {
        throw OutOfDomainError("BoundSpec: delta must be in (0,1)");
      }
      if (static_cast<std::int64_t>(step_ranges.size()) != n) {
        throw OutOfDomainError("BoundSpec: need one step range per step");
      }
      for (double c : step_ranges) {
        if (!(c > 0.0)) {
          throw OutOfDomainError("BoundSpec: step ranges must be positive");
        }
      }
      break;
    case BoundKind::kBernsteinMartingale:
      if (!(delta > 0.0 && delta < 1.0)) {
        throw OutOfDomainError("BoundSpec: delta must be in (0,1)");
      }
      if (!(b > 0.0)) throw OutOfDomainError("BoundSpec: b must be > 0");
      if (!(variance_bound >= 0.0)) {
        throw OutOfDomainError("BoundSpec: variance bound must be >= 0");
      }
      break;
    case BoundKind::kBernsteinUnion:
      if (!(delta > 0.0 && delta < 1.0)) {
        throw OutOfDomainError("BoundSpec: delta must be in (0,1)");
      }
      if (!(b > 0.0)) throw OutOfDomainError("BoundSpec: b must be > 0");
      break;
  }
}

double BoundSpec::failure_probability() const {
  switch (kind) {
    case BoundKind::kChernoff:
      return chernoff_failure_bound(chernoff_c);
    case BoundKind::kHoeffdingAzuma:
    case BoundKind::kBernsteinMartingale:
    case BoundKind::kBernsteinUnion:
      return delta;
  }
  throw Error("BoundSpec: unknown kind");
}

std::string BoundSpec::kind_name() const {
  switch (kind) {
    case BoundKind::kChernoff:
      return "chernoff";
    case BoundKind::kHoeffdingAzuma:
      return "hoeffding-azuma";
    case BoundKind::kBernsteinMartingale:
      return "bernstein-martingale";
    case BoundKind::kBernsteinUnion:
      return "bernstein-union";
  }
  throw Error("BoundSpec: unknown kind");
}

std::string BoundSpec::params_string() const {
  std::ostringstream out;
  out << "n=" << n;
  switch (kind) {
    case BoundKind::kChernoff:
      out << ";C=" << chernoff_c;
      break;
    case BoundKind::kHoeffdingAzuma:
      out << ";delta=" << delta << ";c_t=" << step_ranges.front();
      break;
    case BoundKind::kBernsteinMartingale:
      out << ";delta=" << delta << ";b=" << b << ";V=" << variance_bound;
      break;
    case BoundKind::kBernsteinUnion:
      out << ";delta=" << delta << ";b=" << b;
      break;
  }
  return out.str();
}

double empirical_violation_rate(const BoundSpec& bound,
                                const SequenceSampler& sampler,
                                std::int64_t trials, Rng& rng) {
  bound.validate();
  if (trials < 1) {
    throw OutOfDomainError("empirical_violation_rate: trials must be >= 1");
  }
  std::int64_t violations = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    const SampleSequence seq = sampler(rng);
    if (static_cast<std::int64_t>(seq.values.size()) != bound.n) {
      throw HypothesisViolationError(
          "sampler produced a sequence of the wrong length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
      const double x = seq.values[i];
      switch (bound.kind) {
        case BoundKind::kChernoff:
          if (!(x >= 0.0 && x <= 1.0)) {
            throw HypothesisViolationError(
                "chernoff sampler produced a value outside [0,1]");
          }
          break;
        case BoundKind::kHoeffdingAzuma:
          if (!(std::abs(x) <= bound.step_ranges[i])) {
            throw HypothesisViolationError(
                "martingale difference exceeds its step range");
          }
          break;
        case BoundKind::kBernsteinMartingale:
        case BoundKind::kBernsteinUnion:
          if (!(std::abs(x) <= bound.b)) {
            throw HypothesisViolationError(
                "martingale difference exceeds the range bound b");
          }
          break;
      }
      sum += x;
    }

    bool violated = false;
    switch (bound.kind) {
      case BoundKind::kChernoff:
        violated = std::abs(sum - seq.mean) >
                   chernoff_radius(seq.mean, bound.chernoff_c);
        break;
      case BoundKind::kHoeffdingAzuma:
        violated = sum > hoeffding_azuma_radius(bound.step_ranges, bound.delta);
        break;
      case BoundKind::kBernsteinMartingale:
        // The bound only claims anything when the realized predictable
        // variance stays under V.
        violated =
            seq.predictable_variance <= bound.variance_bound &&
            sum > bernstein_radius(bound.variance_bound, bound.b, bound.delta);
        break;
      case BoundKind::kBernsteinUnion:
        violated = sum > bernstein_union_radius(seq.predictable_variance,
                                                bound.b, bound.n, bound.delta);
        break;
    }
    if (violated) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

SequenceSampler bernoulli_sum_sampler(std::int64_t n, double p) {
  if (n < 1) throw OutOfDomainError("bernoulli_sum_sampler: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw OutOfDomainError("bernoulli_sum_sampler: p must be in [0,1]");
  }
  return [n, p](Rng& rng) {
    SampleSequence seq;
    seq.values.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
      seq.values.push_back(rng.bernoulli(p) ? 1.0 : 0.0);
    }
    seq.mean = static_cast<double>(n) * p;
    return seq;
  };
}

SequenceSampler feedback_walk_sampler(std::int64_t n) {
  if (n < 1) throw OutOfDomainError("feedback_walk_sampler: n must be >= 1");
  return [n](Rng& rng) {
    SampleSequence seq;
    seq.values.reserve(n);
    double running = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double q = running <= 0.0 ? 0.75 : 0.25;
      const double x = (rng.bernoulli(q) ? 1.0 : 0.0) - q;
      seq.values.push_back(x);
      seq.predictable_variance += q * (1.0 - q);
      running += x;
    }
    return seq;
  };
}

std::vector<BoundCheck> builtin_bound_checks() {
  std::vector<BoundCheck> checks;

  {
    BoundSpec spec;
    spec.kind = BoundKind::kChernoff;
    spec.n = 100;
    spec.chernoff_c = 9.0;
    checks.push_back(
        {"chernoff-bernoulli-half", spec, bernoulli_sum_sampler(100, 0.5)});
  }
  {
    BoundSpec spec;
    spec.kind = BoundKind::kChernoff;
    spec.n = 400;
    spec.chernoff_c = 4.5;
    checks.push_back(
        {"chernoff-bernoulli-sparse", spec, bernoulli_sum_sampler(400, 0.02)});
  }
  {
    BoundSpec spec;
    spec.kind = BoundKind::kHoeffdingAzuma;
    spec.n = 200;
    spec.delta = 0.05;
    spec.step_ranges.assign(200, 1.0);
    checks.push_back({"hoeffding-azuma-walk", spec, feedback_walk_sampler(200)});
  }
  {
    BoundSpec spec;
    spec.kind = BoundKind::kBernsteinMartingale;
    spec.n = 500;
    spec.delta = 0.05;
    spec.b = 1.0;
    spec.variance_bound = 500.0 * 0.25;  // q(1-q) <= 1/4 per step
    checks.push_back(
        {"bernstein-martingale-walk", spec, feedback_walk_sampler(500)});
  }
  {
    BoundSpec spec;
    spec.kind = BoundKind::kBernsteinUnion;
    spec.n = 500;
    spec.delta = 0.05;
    spec.b = 1.0;
    checks.push_back(
        {"bernstein-union-walk", spec, feedback_walk_sampler(500)});
  }
  return checks;
}

}  // namespace sao
