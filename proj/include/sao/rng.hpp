#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "sao/errors.hpp"

namespace sao {

// Fixed substream ids used when deriving per-episode seeds from the master
// seed.  The environment stream depends only on the replicate index, never on
// the policy, so that all policies in a comparison face identical reward
// realizations for oblivious and stochastic environments.
//
//   stream 0       environment draws for a replicate
//   stream 1 + j   policy j's own randomization
//   stream 1000    bound validation trials
inline constexpr std::uint64_t kEnvironmentStream = 0;
inline constexpr std::uint64_t kPolicyStreamBase = 1;
inline constexpr std::uint64_t kValidationStream = 1000;

// SplitMix64-style finalizer over (master, stream, index).  This is the
// documented splitting rule: every seed used anywhere in a run is
// derive_seed(master_seed, stream, index) for some (stream, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t z = master;
  z += 0x9E3779B97F4A7C15ULL * (stream + 1);
  z += 0xD1B54A32D192ED03ULL * (index + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// mt19937_64 plus bit-stable uniform helpers.  All sampling goes through
// next_unit() (top 53 bits of one engine draw), so sequences are identical
// across standard library implementations and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Inverse-CDF walk over a probability vector.  The final positive-mass
  // bucket absorbs rounding slack.
  int pick(std::span<const double> probs) {
    const double u = next_unit();
    double cum = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    if (last_positive < 0) {
      throw InvalidProbabilityError("pick: probability vector has no mass");
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

// Deterministic unit-interval hash of (seed, a, b); used for lazily
// materialized oblivious reward tables.
inline double unit_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return static_cast<double>(derive_seed(seed, a, b) >> 11) * 0x1.0p-53;
}

}  // namespace sao
