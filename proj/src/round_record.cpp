#include "sao/round_record.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace sao {
namespace {

struct PhaseName {
  Phase phase;
  std::string_view name;
};
constexpr std::array<PhaseName, 5> kPhaseNames{{
    {Phase::kExploration, "exploration"},
    {Phase::kExploitation, "exploitation"},
    {Phase::kAdversarial, "adversarial"},
    {Phase::kInterleaved, "interleaved"},
    {Phase::kBaseline, "baseline"},
}};

struct TestName {
  FiredTest test;
  std::string_view name;
};
constexpr std::array<TestName, 8> kTestNames{{
    {FiredTest::kNone, "none"},
    {FiredTest::kExplorationExit1, "exploration-exit-1"},
    {FiredTest::kCond2, "cond-2"},
    {FiredTest::kCond3, "cond-3"},
    {FiredTest::kDeactivate7, "deactivate-7"},
    {FiredTest::kConsistency8, "consistency-8"},
    {FiredTest::kConsistency9, "consistency-9"},
    {FiredTest::kConsistency10, "consistency-10"},
}};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, std::int64_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TraceError("trace line " + std::to_string(line_no) +
                     ": bad numeric field '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, std::int64_t line_no) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TraceError("trace line " + std::to_string(line_no) +
                     ": bad integer field '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(Phase phase) {
  for (const auto& e : kPhaseNames) {
    if (e.phase == phase) return e.name;
  }
  throw Error("unknown phase value");
}

std::string_view to_string(FiredTest test) {
  for (const auto& e : kTestNames) {
    if (e.test == test) return e.name;
  }
  throw Error("unknown fired-test value");
}

Phase phase_from_string(std::string_view s) {
  for (const auto& e : kPhaseNames) {
    if (e.name == s) return e.phase;
  }
  throw TraceError("unknown phase tag '" + std::string(s) + "'");
}

FiredTest fired_test_from_string(std::string_view s) {
  for (const auto& e : kTestNames) {
    if (e.name == s) return e.test;
  }
  throw TraceError("unknown fired-test tag '" + std::string(s) + "'");
}

bool is_simplex(std::span<const double> p, double tol) {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0) || std::isnan(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace) {
  const int num_arms =
      trace.empty() ? 0 : static_cast<int>(trace.front().probabilities.size());
  out << "t,phase,chosen,reward,fired_test";
  for (int i = 0; i < num_arms; ++i) out << ",p_" << i;
  out << '\n';
  for (const RoundRecord& r : trace) {
    if (static_cast<int>(r.probabilities.size()) != num_arms) {
      throw TraceError("trace rows disagree on arm count");
    }
    out << r.t << ',' << to_string(r.phase) << ',' << r.chosen << ','
        << format_double17(r.reward) << ',' << to_string(r.fired_test);
    for (double p : r.probabilities) out << ',' << format_double17(p);
    out << '\n';
  }
}

std::vector<RoundRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw TraceError("trace file is empty");
  const std::vector<std::string> header = split_csv_line(line);
  const std::array<std::string_view, 5> fixed = {"t", "phase", "chosen",
                                                 "reward", "fired_test"};
  if (header.size() < fixed.size() + 1) {
    throw TraceError("trace header has too few columns");
  }
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (header[i] != fixed[i]) {
      throw TraceError("trace header column " + std::to_string(i) +
                       " is '" + header[i] + "', expected '" +
                       std::string(fixed[i]) + "'");
    }
  }
  const int num_arms = static_cast<int>(header.size() - fixed.size());
  for (int i = 0; i < num_arms; ++i) {
    if (header[fixed.size() + i] != "p_" + std::to_string(i)) {
      throw TraceError("trace header probability columns must be p_0..p_" +
                       std::to_string(num_arms - 1));
    }
  }

  std::vector<RoundRecord> trace;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (static_cast<int>(f.size()) != 5 + num_arms) {
      throw TraceError("trace line " + std::to_string(line_no) +
                       ": expected " + std::to_string(5 + num_arms) +
                       " fields, got " + std::to_string(f.size()));
    }
    RoundRecord r;
    r.t = parse_int(f[0], line_no);
    r.phase = phase_from_string(f[1]);
    r.chosen = static_cast<int>(parse_int(f[2], line_no));
    r.reward = parse_double(f[3], line_no);
    r.fired_test = fired_test_from_string(f[4]);
    r.probabilities.reserve(num_arms);
    for (int i = 0; i < num_arms; ++i) {
      r.probabilities.push_back(parse_double(f[5 + i], line_no));
    }
    if (r.chosen < 0 || r.chosen >= num_arms) {
      throw TraceError("trace line " + std::to_string(line_no) +
                       ": chosen arm out of range");
    }
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace sao
