#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sao/environments.hpp"
#include "sao/rng.hpp"

using namespace sao;

TEST_CASE("stochastic environment draws per-arm bernoulli rewards") {
  SUBCASE("degenerate means are deterministic") {
    StochasticEnvironment env = StochasticEnvironment::bernoulli({1.0, 0.0});
    Rng rng(1);
    PlayHistory hist;
    for (std::int64_t t = 1; t <= 50; ++t) {
      const std::vector<double> r = draw_round(env, t, hist, rng);
      CHECK(r == std::vector<double>{1.0, 0.0});
      hist.push(0, r);
    }
    CHECK(env.kind() == "stochastic");
    REQUIRE(env.means().has_value());
    CHECK(*env.means() == std::vector<double>{1.0, 0.0});
  }
  SUBCASE("empirical mean concentrates on the parameter") {
    StochasticEnvironment env = StochasticEnvironment::bernoulli({0.6, 0.4});
    Rng rng(derive_seed(21, kEnvironmentStream, 0));
    PlayHistory hist;
    double sum = 0.0;
    const std::int64_t n = 100000;
    for (std::int64_t t = 1; t <= n; ++t) {
      const std::vector<double> r = draw_round(env, t, hist, rng);
      hist.push(0, r);
      sum += r[0];
    }
    const double tol = 3.0 * std::sqrt(0.6 * 0.4 / static_cast<double>(n));
    CHECK(std::abs(sum / static_cast<double>(n) - 0.6) < tol);
  }
  SUBCASE("construction is validated") {
    CHECK_THROWS_AS(StochasticEnvironment::bernoulli({0.5}), ConfigError);
    CHECK_THROWS_AS(StochasticEnvironment::bernoulli({0.5, 1.5}), ConfigError);
  }
}

TEST_CASE("minimal gap is best-to-runner-up") {
  CHECK(StochasticEnvironment::bernoulli({0.7, 0.5, 0.5}).minimal_gap() ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(StochasticEnvironment::bernoulli({0.9, 0.1}).minimal_gap() ==
        doctest::Approx(0.8).epsilon(1e-15));
  // All arms tied: no suboptimal arm, gap reported as 0.
  CHECK(StochasticEnvironment::bernoulli({0.5, 0.5}).minimal_gap() == 0.0);
}

TEST_CASE("discrete distributions sample their support") {
  DiscreteDistribution d;
  d.values = {0.0, 0.5, 1.0};
  d.weights = {0.2, 0.3, 0.5};
  d.validate();
  CHECK(d.mean() == doctest::Approx(0.65).epsilon(1e-15));
  Rng rng(17);
  double sum = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) sum += d.sample(rng);
  // Variance of one draw: E[X^2] - mean^2 = 0.575 - 0.4225 = 0.1525.
  CHECK(std::abs(sum / n - 0.65) < 3.0 * std::sqrt(0.1525 / n));

  DiscreteDistribution bad = d;
  bad.weights = {0.2, 0.3};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = d;
  bad.weights = {0.2, 0.3, 0.4};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = d;
  bad.values = {0.0, 0.5, 1.5};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("constant adversary repeats its vector") {
  ConstantAdversary env({0.7, 0.3});
  CHECK(env.kind() == "oblivious-constant");
  Rng rng(1);
  PlayHistory hist;
  for (std::int64_t t = 1; t <= 20; ++t) {
    const std::vector<double> r = draw_round(env, t, hist, rng);
    CHECK(r == std::vector<double>{0.7, 0.3});
    hist.push(1, r);
  }
}

TEST_CASE("hash adversary depends only on (seed, round, arm)") {
  HashAdversary a(3, 99), b(3, 99), c(3, 100);
  Rng rng(1);
  PlayHistory ha, hb, hc;
  bool any_difference = false;
  for (std::int64_t t = 1; t <= 100; ++t) {
    const auto ra = draw_round(a, t, ha, rng);
    const auto rb = draw_round(b, t, hb, rng);
    const auto rc = draw_round(c, t, hc, rng);
    CHECK(ra == rb);
    if (ra != rc) any_difference = true;
    for (double v : ra) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
    // Push different plays into the two histories: an oblivious table must
    // not care.
    ha.push(0, ra);
    hb.push(static_cast<int>(t % 3), rb);
    hc.push(0, rc);
  }
  CHECK(any_difference);
  CHECK(a.kind() == "oblivious-hash");
}

TEST_CASE("matrix adversary plays back stored rows and nothing more") {
  MatrixAdversary env({{0.1, 0.9}, {0.2, 0.8}});
  Rng rng(1);
  PlayHistory hist;
  const auto r1 = draw_round(env, 1, hist, rng);
  CHECK(r1 == std::vector<double>{0.1, 0.9});
  hist.push(0, r1);
  const auto r2 = draw_round(env, 2, hist, rng);
  CHECK(r2 == std::vector<double>{0.2, 0.8});
  hist.push(0, r2);
  CHECK_THROWS_AS(draw_round(env, 3, hist, rng), HorizonExceededError);
  CHECK_THROWS_AS(MatrixAdversary({{0.1, 0.9}, {0.2}}), ConfigError);
  CHECK_THROWS_AS(MatrixAdversary({}), ConfigError);
}

TEST_CASE("draw_round enforces the simultaneity contract") {
  ConstantAdversary env({0.5, 0.5});
  Rng rng(1);
  PlayHistory hist;
  CHECK_THROWS_AS(draw_round(env, 0, hist, rng), Error);
  // History must cover exactly rounds 1..t-1.
  CHECK_THROWS_AS(draw_round(env, 2, hist, rng), Error);
  // Rewards outside [0,1] are an error, never clamped.
  MatrixAdversary loud({{1.5, 0.0}});
  CHECK_THROWS_AS(draw_round(loud, 1, hist, rng), InvalidRewardError);
}

TEST_CASE("flip adversary changes means strictly after the flip round") {
  FlipAdversary env({0.8, 0.2}, {0.2, 0.8}, 600);
  CHECK(env.kind() == "stochastic-then-flip");
  CHECK(env.means_at(1) == std::vector<double>{0.8, 0.2});
  CHECK(env.means_at(600) == std::vector<double>{0.8, 0.2});
  CHECK(env.means_at(601) == std::vector<double>{0.2, 0.8});
  CHECK_THROWS_AS(FlipAdversary({0.8, 0.2}, {0.2}, 600), ConfigError);
  CHECK_THROWS_AS(FlipAdversary({0.8, 0.2}, {0.2, 0.8}, 0), ConfigError);
}

TEST_CASE("flip adversary cumulative benchmarks cross after the flip") {
  // Arm 0 leads by roughly 0.6 * 600 at the flip; the lead then erodes at
  // the same rate, so the benchmarks cross near round 1200.
  FlipAdversary env({0.8, 0.2}, {0.2, 0.8}, 600);
  Rng rng(derive_seed(5, kEnvironmentStream, 0));
  PlayHistory hist;
  double g0 = 0.0, g1 = 0.0;
  std::int64_t cross = -1;
  for (std::int64_t t = 1; t <= 2000; ++t) {
    const std::vector<double> r = draw_round(env, t, hist, rng);
    hist.push(0, r);
    g0 += r[0];
    g1 += r[1];
    if (cross < 0 && t > 600 && g1 >= g0) cross = t;
  }
  CHECK(cross > 1050);
  CHECK(cross < 1350);
  CHECK(g1 > g0);
}

TEST_CASE("gap inflater raises the best arm after its switch") {
  GapInflater env({0.65, 0.35}, 100, {});
  CHECK(env.kind() == "gap-inflater");
  CHECK(env.means_at(100) == std::vector<double>{0.65, 0.35});
  // Default schedule: the best arm saturates, the rest keep their means.
  CHECK(env.means_at(101) == std::vector<double>{1.0, 0.35});
  GapInflater custom({0.65, 0.35}, 100, {0.9, 0.1});
  CHECK(custom.means_at(101) == std::vector<double>{0.9, 0.1});
  CHECK_THROWS_AS(GapInflater({0.65, 0.35}, 0, {}), ConfigError);
}

TEST_CASE("gap collapser pulls means toward their midpoint") {
  GapCollapser full({0.95, 0.05}, 500, 1.0);
  CHECK(full.kind() == "gap-collapser");
  CHECK(full.means_at(500) == std::vector<double>{0.95, 0.05});
  CHECK(full.means_at(501) == std::vector<double>{0.5, 0.5});
  GapCollapser half({0.95, 0.05}, 500, 0.5);
  CHECK(half.means_at(501)[0] == doctest::Approx(0.725).epsilon(1e-15));
  CHECK(half.means_at(501)[1] == doctest::Approx(0.275).epsilon(1e-15));
  CHECK_THROWS_AS(GapCollapser({0.95, 0.05}, 500, 1.5), ConfigError);
}

TEST_CASE("gap collapser with zero fraction is the plain stochastic model") {
  GapCollapser scheduled({0.95, 0.05}, 500, 0.0);
  StochasticEnvironment plain = StochasticEnvironment::bernoulli({0.95, 0.05});
  Rng r1(derive_seed(8, kEnvironmentStream, 0));
  Rng r2(derive_seed(8, kEnvironmentStream, 0));
  PlayHistory h1, h2;
  for (std::int64_t t = 1; t <= 1200; ++t) {
    const auto a = draw_round(scheduled, t, h1, r1);
    const auto b = draw_round(plain, t, h2, r2);
    CHECK(a == b);
    h1.push(0, a);
    h2.push(0, b);
  }
}

TEST_CASE("estimator skewer walks through its three stages") {
  EstimatorSkewer env({0.6, 0.1}, 100, 200, {}, {});
  CHECK(env.kind() == "estimator-skewer");
  CHECK(env.means_at(100) == std::vector<double>{0.6, 0.1});
  // Stage two raises the best arm; stage three raises the worst one too.
  CHECK(env.means_at(101) == std::vector<double>{1.0, 0.1});
  CHECK(env.means_at(200) == std::vector<double>{1.0, 0.1});
  CHECK(env.means_at(201) == std::vector<double>{1.0, 1.0});
  EstimatorSkewer custom({0.6, 0.1}, 100, 200, {0.8, 0.1}, {0.8, 1.0});
  CHECK(custom.means_at(150) == std::vector<double>{0.8, 0.1});
  CHECK(custom.means_at(250) == std::vector<double>{0.8, 1.0});
  CHECK_THROWS_AS(EstimatorSkewer({0.6, 0.1}, 200, 100, {}, {}), ConfigError);
  CHECK_THROWS_AS(EstimatorSkewer({0.6, 0.1}, 100, 100, {}, {}), ConfigError);
}

TEST_CASE("scheduled adversaries emit 0/1 rewards") {
  FlipAdversary env({0.8, 0.2}, {0.2, 0.8}, 50);
  Rng rng(derive_seed(12, kEnvironmentStream, 0));
  PlayHistory hist;
  for (std::int64_t t = 1; t <= 200; ++t) {
    const std::vector<double> r = draw_round(env, t, hist, rng);
    for (double v : r) CHECK((v == 0.0 || v == 1.0));
    hist.push(0, r);
  }
}

TEST_CASE("probe factory dispatches on the schedule kind") {
  ProbeParams params;
  params.means = {0.9, 0.1};
  params.means_after = {0.1, 0.9};
  params.switch_round = 100;
  params.second_switch_round = 200;
  CHECK(make_probe_adversary("stochastic-then-flip", params)->kind() ==
        "stochastic-then-flip");
  CHECK(make_probe_adversary("gap-inflater", params)->kind() ==
        "gap-inflater");
  CHECK(make_probe_adversary("gap-collapser", params)->kind() ==
        "gap-collapser");
  CHECK(make_probe_adversary("estimator-skewer", params)->kind() ==
        "estimator-skewer");
  CHECK_THROWS_AS(make_probe_adversary("drifting", params), ConfigError);
}
