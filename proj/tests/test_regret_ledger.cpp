#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "sao/regret_ledger.hpp"
#include "sao/rng.hpp"

using namespace sao;

TEST_CASE("adversarial regret compares against the best fixed arm") {
  RegretLedger ledger(2, std::nullopt);
  // Benchmarks end at G = (10, 7) while the player collects 8.
  ledger.on_round(std::vector<double>{6.0, 5.0}, 0);
  ledger.on_round(std::vector<double>{4.0, 2.0}, 1);
  CHECK(ledger.benchmark_sum(0) == 10.0);
  CHECK(ledger.benchmark_sum(1) == 7.0);
  CHECK(ledger.collected() == 8.0);
  CHECK(ledger.adversarial_regret() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(ledger.has_means());
  CHECK_THROWS_AS(ledger.pseudo_regret(), ModelMismatchError);
}

TEST_CASE("playing the best fixed arm on constant rewards gives zero regret") {
  RegretLedger ledger(2, std::nullopt);
  for (int t = 0; t < 50; ++t) {
    ledger.on_round(std::vector<double>{0.7, 0.3}, 0);
  }
  CHECK(ledger.adversarial_regret() == 0.0);
}

TEST_CASE("a tracking player can beat every fixed arm") {
  RegretLedger ledger(2, std::nullopt);
  ledger.on_round(std::vector<double>{1.0, 0.0}, 0);
  ledger.on_round(std::vector<double>{0.0, 1.0}, 1);
  // Both fixed arms collect 1; the player collected 2.
  CHECK(ledger.adversarial_regret() == -1.0);
}

TEST_CASE("ledger matches an independent recomputation on random play") {
  Rng rng(derive_seed(31, 0, 0));
  RegretLedger ledger(2, std::nullopt);
  double g0 = 0.0, g1 = 0.0, collected = 0.0;
  std::vector<double> p = {0.5, 0.5};
  for (int t = 0; t < 100; ++t) {
    const std::vector<double> rewards = {rng.next_unit(), rng.next_unit()};
    const int arm = rng.pick(p);
    ledger.on_round(rewards, arm);
    g0 += rewards[0];
    g1 += rewards[1];
    collected += rewards[static_cast<std::size_t>(arm)];
  }
  CHECK(ledger.adversarial_regret() ==
        doctest::Approx(std::max(g0, g1) - collected).epsilon(1e-12));
}

TEST_CASE("pseudo regret charges the mean gap of each pull") {
  SUBCASE("always playing the best arm costs nothing") {
    RegretLedger ledger(2, std::vector<double>{0.6, 0.4});
    for (int t = 0; t < 100; ++t) {
      ledger.on_round(std::vector<double>{1.0, 0.0}, 0);
    }
    CHECK(ledger.pseudo_regret() == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("always playing the worst arm costs gap per round") {
    RegretLedger ledger(2, std::vector<double>{0.6, 0.4});
    for (int t = 0; t < 100; ++t) {
      ledger.on_round(std::vector<double>{1.0, 0.0}, 1);
    }
    CHECK(ledger.pseudo_regret() == doctest::Approx(20.0).epsilon(1e-12));
  }
  SUBCASE("mixed play across three arms") {
    RegretLedger ledger(3, std::vector<double>{0.9, 0.5, 0.5});
    const std::vector<double> rewards = {0.0, 0.0, 0.0};
    for (int t = 0; t < 50; ++t) ledger.on_round(rewards, 0);
    for (int t = 0; t < 25; ++t) ledger.on_round(rewards, 1);
    for (int t = 0; t < 25; ++t) ledger.on_round(rewards, 2);
    // 100 * 0.9 - (50*0.9 + 25*0.5 + 25*0.5) = 20.
    CHECK(ledger.pseudo_regret() == doctest::Approx(20.0).epsilon(1e-12));
    // Pseudo regret ignores the realized rewards entirely.
    CHECK(ledger.collected() == 0.0);
  }
}

TEST_CASE("construction and round arity are validated") {
  CHECK_THROWS_AS(RegretLedger(0, std::nullopt), Error);
  CHECK_THROWS_AS(RegretLedger(2, std::vector<double>{0.5}),
                  ModelMismatchError);
  RegretLedger ledger(2, std::nullopt);
  CHECK_THROWS_AS(ledger.on_round(std::vector<double>{0.5}, 0), Error);
  CHECK_THROWS_AS(ledger.on_round(std::vector<double>{0.5, 0.5}, 2), Error);
  CHECK_THROWS_AS(ledger.on_round(std::vector<double>{0.5, 0.5}, -1), Error);
}
