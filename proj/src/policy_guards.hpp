#pragma once

// Internal argument/sequencing guards shared by the policy implementations.

#include <cstdint>
#include <string>

#include "sao/errors.hpp"

namespace sao::detail {

inline void check_arity(int num_arms) {
  if (num_arms < 2) {
    throw ConfigError("policy needs at least 2 arms, got " +
                      std::to_string(num_arms));
  }
}

inline void check_horizon(std::int64_t horizon) {
  if (horizon < 1) {
    throw ConfigError("policy horizon must be positive, got " +
                      std::to_string(horizon));
  }
}

inline void check_round(std::int64_t t, std::int64_t rounds_so_far,
                        std::int64_t horizon) {
  if (t != rounds_so_far + 1) {
    throw InvariantViolationError("round " + std::to_string(t) +
                                  " out of order; expected " +
                                  std::to_string(rounds_so_far + 1));
  }
  if (t > horizon) {
    throw HorizonExceededError("round " + std::to_string(t) +
                               " beyond horizon " + std::to_string(horizon));
  }
}

inline void check_observation_round(std::int64_t t, std::int64_t latest) {
  if (t != latest) {
    throw InvariantViolationError("observation for round " +
                                  std::to_string(t) + " but latest round is " +
                                  std::to_string(latest));
  }
}

inline void check_observation(int arm, int num_arms, double reward) {
  if (arm < 0 || arm >= num_arms) {
    throw OutOfDomainError("observed arm " + std::to_string(arm) +
                           " out of range");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw InvalidRewardError("observed reward " + std::to_string(reward) +
                             " outside [0, 1]");
  }
}

}  // namespace sao::detail
