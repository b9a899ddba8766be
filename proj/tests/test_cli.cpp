// End-to-end tests for the command-line binary (path supplied via the
// SAO_CLI environment variable): run/compare/replay/validate-bounds flows,
// exit codes, and on-disk outputs.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sao/round_record.hpp"

namespace {

constexpr const char* kRunConfig =
    "[experiment]\n"
    "horizon = 200\n"
    "replicates = 2\n"
    "seed = 9\n"
    "\n"
    "[environment]\n"
    "kind = stochastic\n"
    "means = 0.7, 0.4\n"
    "\n"
    "[policy]\n"
    "kind = ucb1\n";

// Scratch directory for one test case; removed on destruction.
struct CliCase {
  std::filesystem::path dir;

  explicit CliCase(const std::string& name)
      : dir(std::filesystem::temp_directory_path() / ("sao_cli_" + name)) {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  ~CliCase() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  std::string path(const std::string& leaf) const {
    return (dir / leaf).string();
  }

  void write(const std::string& leaf, const std::string& text) const {
    std::ofstream out(path(leaf), std::ios::binary);
    out << text;
  }

  std::string slurp(const std::string& leaf) const {
    std::ifstream in(path(leaf), std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }

  bool exists(const std::string& leaf) const {
    return std::filesystem::exists(path(leaf));
  }

  // Runs the binary with `args`, capturing stdout/stderr into the case dir.
  int run(const std::string& args) const {
    const char* binary = std::getenv("SAO_CLI");
    REQUIRE_MESSAGE(binary != nullptr,
                    "SAO_CLI must point at the built binary");
    const std::string command = std::string("\"") + binary + "\" " + args +
                                " > \"" + path("stdout.txt") + "\" 2> \"" +
                                path("stderr.txt") + "\"";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out_text() const { return slurp("stdout.txt"); }
  std::string err_text() const { return slurp("stderr.txt"); }
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("cli reports its version") {
  CliCase box("version");
  CHECK(box.run("--version") == 0);
  CHECK(contains(box.out_text(), "0.1.0"));
}

TEST_CASE("cli run writes aggregate and manifest, deterministically") {
  CliCase box("run");
  box.write("exp.ini", kRunConfig);

  REQUIRE(box.run("--out \"" + box.path("out1") + "\" run \"" +
                  box.path("exp.ini") + "\"") == 0);
  REQUIRE(box.exists("out1/aggregate.csv"));
  REQUIRE(box.exists("out1/manifest.ini"));
  CHECK(contains(box.out_text(), "aggregate.csv"));

  const std::string aggregate = box.slurp("out1/aggregate.csv");
  CHECK(contains(aggregate,
                 "checkpoint,policy,mean_regret,median,p90,exp3p_start_freq,"
                 "envelope,capped_envelope\n"));
  CHECK(contains(aggregate, ",ucb1,"));

  const std::string manifest = box.slurp("out1/manifest.ini");
  CHECK(contains(manifest, "# version = 0.1.0"));
  CHECK(contains(manifest, "# seed = 9"));
  CHECK(contains(manifest, "kind = ucb1"));

  SUBCASE("a second run reproduces the files byte for byte") {
    REQUIRE(box.run("--out \"" + box.path("out2") + "\" --parallel 2 run \"" +
                    box.path("exp.ini") + "\"") == 0);
    CHECK(box.slurp("out2/aggregate.csv") == aggregate);
    CHECK(box.slurp("out2/manifest.ini") == manifest);
  }

  SUBCASE("--seed overrides the config seed in outputs") {
    REQUIRE(box.run("--out \"" + box.path("out3") + "\" --seed 123 run \"" +
                    box.path("exp.ini") + "\"") == 0);
    CHECK(contains(box.slurp("out3/manifest.ini"), "# seed = 123"));
    CHECK(box.slurp("out3/aggregate.csv") != aggregate);
  }
}

TEST_CASE("cli emits traces that replay verifies bit-exactly") {
  CliCase box("replay");
  box.write("exp.ini", kRunConfig);
  REQUIRE(box.run("--out \"" + box.path("out") + "\" --emit-traces run \"" +
                  box.path("exp.ini") + "\"") == 0);
  REQUIRE(box.exists("out/trace_ucb1_r0.csv"));
  REQUIRE(box.exists("out/trace_ucb1_r1.csv"));

  SUBCASE("replay confirms an untouched trace") {
    CHECK(box.run("replay \"" + box.path("out/trace_ucb1_r0.csv") + "\" \"" +
                  box.path("exp.ini") + "\"") == 0);
    CHECK(contains(box.out_text(), "trace verified (200 rounds match)"));

    CHECK(box.run("replay \"" + box.path("out/trace_ucb1_r1.csv") + "\" \"" +
                  box.path("exp.ini") + "\" --replicate 1") == 0);
    CHECK(contains(box.out_text(), "trace verified (200 rounds match)"));
  }

  SUBCASE("replaying against the wrong replicate fails") {
    CHECK(box.run("replay \"" + box.path("out/trace_ucb1_r1.csv") + "\" \"" +
                  box.path("exp.ini") + "\" --replicate 0") == 1);
    CHECK(contains(box.err_text(), "trace mismatch at round"));
  }

  SUBCASE("a tampered reward is caught at its round") {
    std::ifstream in(box.path("out/trace_ucb1_r0.csv"));
    auto trace = sao::read_trace_csv(in);
    REQUIRE(trace.size() == 200);
    trace[0].reward = trace[0].reward == 1.0 ? 0.0 : 1.0;
    std::ostringstream tampered;
    sao::write_trace_csv(tampered, trace);
    box.write("out/trace_ucb1_r0.csv", tampered.str());

    CHECK(box.run("replay \"" + box.path("out/trace_ucb1_r0.csv") + "\" \"" +
                  box.path("exp.ini") + "\"") == 1);
    CHECK(contains(box.err_text(), "trace mismatch at round 1"));
  }

  SUBCASE("a truncated trace is caught by the length check") {
    std::ifstream in(box.path("out/trace_ucb1_r0.csv"));
    const auto trace = sao::read_trace_csv(in);
    std::ostringstream truncated;
    sao::write_trace_csv(
        truncated, std::span<const sao::RoundRecord>(trace.data(), 199));
    box.write("out/trace_ucb1_r0.csv", truncated.str());

    CHECK(box.run("replay \"" + box.path("out/trace_ucb1_r0.csv") + "\" \"" +
                  box.path("exp.ini") + "\"") == 1);
    CHECK(contains(box.err_text(), "trace mismatch: file has 199 rounds"));
  }
}

TEST_CASE("cli distinguishes config errors from runtime failures") {
  CliCase box("errors");

  SUBCASE("invalid experiment settings exit 2") {
    box.write("bad.ini",
              "[experiment]\n"
              "horizon = 1\n"
              "replicates = 1\n"
              "seed = 1\n"
              "[environment]\n"
              "kind = stochastic\n"
              "means = 0.5, 0.5\n"
              "[policy]\n"
              "kind = ucb1\n");
    CHECK(box.run("run \"" + box.path("bad.ini") + "\"") == 2);
    CHECK(contains(box.err_text(), "config error"));
  }

  SUBCASE("missing config file exits 2") {
    CHECK(box.run("run \"" + box.path("absent.ini") + "\"") == 2);
    CHECK(contains(box.err_text(), "config error"));
  }

  SUBCASE("unknown flags fail argument parsing") {
    box.write("exp.ini", kRunConfig);
    CHECK(box.run("--frobnicate run \"" + box.path("exp.ini") + "\"") != 0);
  }

  SUBCASE("compare requires at least two policies") {
    box.write("exp.ini", kRunConfig);
    CHECK(box.run("--out \"" + box.path("out") + "\" compare \"" +
                  box.path("exp.ini") + "\"") == 2);
    CHECK(contains(box.err_text(), "compare needs at least 2"));
  }
}

TEST_CASE("cli compare runs every configured policy") {
  CliCase box("compare");
  box.write("duel.ini",
            "[experiment]\n"
            "horizon = 200\n"
            "replicates = 2\n"
            "seed = 9\n"
            "[environment]\n"
            "kind = stochastic\n"
            "means = 0.7, 0.4\n"
            "[policy]\n"
            "kind = ucb1\n"
            "[policy]\n"
            "kind = exp3\n");
  REQUIRE(box.run("--out \"" + box.path("out") + "\" compare \"" +
                  box.path("duel.ini") + "\"") == 0);
  const std::string aggregate = box.slurp("out/aggregate.csv");
  CHECK(contains(aggregate, ",ucb1,"));
  CHECK(contains(aggregate, ",exp3,"));
}

TEST_CASE("cli strict mode flags envelope violations with exit 3") {
  // Three well-separated arms over a short horizon: mean regret of the
  // mode-switching policy stays above the distribution-free cap
  // (gap * horizon), so --strict must refuse the run.
  CliCase box("strict");
  box.write("tight.ini",
            "[experiment]\n"
            "horizon = 500\n"
            "replicates = 10\n"
            "seed = 42\n"
            "[environment]\n"
            "kind = stochastic\n"
            "means = 0.9, 0.7, 0.1\n"
            "[policy]\n"
            "kind = sao\n"
            "beta_mode = high-prob\n");

  CHECK(box.run("--out \"" + box.path("lax") + "\" run \"" +
                box.path("tight.ini") + "\"") == 0);

  CHECK(box.run("--out \"" + box.path("out") + "\" --strict run \"" +
                box.path("tight.ini") + "\"") == 3);
  CHECK(contains(box.err_text(), "strict:"));
  CHECK(contains(box.err_text(), "exceeds its envelope cap"));
  CHECK(box.exists("out/aggregate.csv"));
}

TEST_CASE("cli validate-bounds writes a rate table and passes") {
  CliCase box("bounds");
  REQUIRE(box.run("--out \"" + box.path("out") +
                  "\" validate-bounds --trials 20000") == 0);
  REQUIRE(box.exists("out/bounds.csv"));

  const std::string csv = box.slurp("out/bounds.csv");
  CHECK(count_lines(csv) == 6);  // header + one row per built-in bound
  CHECK(contains(csv, "bound,params,theoretical,empirical,trials\n"));
  CHECK(contains(csv, "chernoff-bernoulli-half,"));
  CHECK(contains(csv, "hoeffding-azuma-walk,"));
  CHECK(contains(csv, "bernstein-union-walk,"));
  CHECK(contains(csv, ",20000\n"));
  CHECK(contains(box.out_text(), "ok   "));
  CHECK_FALSE(contains(box.out_text(), "FAIL"));
}
