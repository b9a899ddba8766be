#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sao/errors.hpp"

namespace sao {

// Phase the policy was in while the round was played.
enum class Phase {
  kExploration,   // simple-sao: uniform exploration
  kExploitation,  // simple-sao: leader exploitation
  kAdversarial,   // exponential-weights fallback is serving
  kInterleaved,   // sao: active-set play before any switch
  kBaseline,      // ucb1 / exp3 / exp3p run standalone
};

// Identifier of the consistency test that fired at the end of a round.
// The wire strings below are part of the trace format.
enum class FiredTest {
  kNone,             // "none"
  kExplorationExit1, // "exploration-exit-1"  simple-sao leaves exploration
  kCond2,            // "cond-2"  exploitation gap left its admissible window
  kCond3,            // "cond-3"  exploitation estimator agreement failed
  kDeactivate7,      // "deactivate-7"  an arm was deactivated this round
  kConsistency8,     // "consistency-8"  per-arm estimator agreement failed
  kConsistency9,     // "consistency-9"  deactivated arm looks far worse now
  kConsistency10,    // "consistency-10" deactivated arm no longer looks bad
};

std::string_view to_string(Phase phase);
std::string_view to_string(FiredTest test);
Phase phase_from_string(std::string_view s);
FiredTest fired_test_from_string(std::string_view s);

// One simulated round: full selection probabilities, the sampled arm, the
// revealed reward, and which test (if any) fired after the round.
struct RoundRecord {
  std::int64_t t = 0;
  Phase phase = Phase::kBaseline;
  int chosen = 0;
  double reward = 0.0;
  FiredTest fired_test = FiredTest::kNone;
  std::vector<double> probabilities;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// True when p is entrywise in [0,1] and sums to 1 within `tol`.
bool is_simplex(std::span<const double> p, double tol = 1e-9);

// Shortest decimal form that round-trips a double exactly (%.17g).
std::string format_double17(double v);

// Trace CSV with header  t,phase,chosen,reward,fired_test,p_0,...,p_{K-1}.
// Floats are written with 17 significant digits so that parsing the file
// recovers bit-identical values.
void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace);
std::vector<RoundRecord> read_trace_csv(std::istream& in);

}  // namespace sao
