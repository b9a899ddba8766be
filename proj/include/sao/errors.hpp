#pragma once

#include <stdexcept>
#include <string>

namespace sao {

// Base type for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A policy handed out a zero or negative selection probability.
struct InvalidProbabilityError : Error { using Error::Error; };

// A reward outside [0,1] was produced or recorded.
struct InvalidRewardError : Error { using Error::Error; };

// Per-play average requested for an arm that was never played
// (or per-round average before the first round).
struct UndefinedAverageError : Error { using Error::Error; };

// A stochastic-model quantity was requested from an adversarial run.
struct ModelMismatchError : Error { using Error::Error; };

// A policy was asked to act past its configured horizon.
struct HorizonExceededError : Error { using Error::Error; };

// A bound evaluator was called outside its parameter domain.
struct OutOfDomainError : Error { using Error::Error; };

// A sampler fed to a bound validator broke the bound's hypotheses.
struct HypothesisViolationError : Error { using Error::Error; };

// A structural invariant that is asserted every round failed.
struct InvariantViolationError : Error { using Error::Error; };

// Configuration file parse or validation failure.
struct ConfigError : Error { using Error::Error; };

// Trace file parse or verification failure.
struct TraceError : Error { using Error::Error; };

}  // namespace sao
