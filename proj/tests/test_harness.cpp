#include "doctest.h"
#include "ultralattice/harness.hpp"

using namespace ultralattice;

TEST_CASE("gen_random_lattice contract") {
  auto cfg = RingConfig::make(3, 1, 16, 1, -4);
  std::mt19937_64 rng(1);
  CHECK(gen_random_lattice(rng, cfg, 2, 0, 3).generators.empty());

  std::mt19937_64 a(42), b(42);
  nlohmann::json ja = gen_random_lattice(a, cfg, 3, 4, 6), jb = gen_random_lattice(b, cfg, 3, 4, 6);
  CHECK(ja.dump() == jb.dump());

  for (int i = 0; i < 50; ++i) {
    auto L = gen_random_lattice(rng, cfg, 2, 3, 2);
    REQUIRE(L.generators.size() == 3);
    for (const auto& g : L.generators) {
      CHECK_FALSE(vec_is_zero(g));
      for (const auto& e : g) CHECK(e.factor(0).size() <= 2);
    }
  }
  CHECK_THROWS_AS(gen_random_lattice(rng, cfg, 5, 1, 1), Error);
  CHECK_THROWS_AS(gen_random_lattice(rng, cfg, 1, 1, 7), Error);
}

TEST_CASE("default suite passes with no undecided verdicts") {
  SuiteConfig sc;
  auto r = run_suite(sc);
  CHECK(r.pass());
  CHECK(r.total_undecided() == 0);
  CHECK(r.checks.size() == check_ids().size());
  for (const auto& c : r.checks) CHECK(c.passed > 0);
}

TEST_CASE("zero counts give a vacuous pass") {
  SuiteConfig sc;
  sc.instances = 0;
  auto r = run_suite(sc);
  CHECK(r.pass());
  for (const auto& c : r.checks) CHECK(c.passed + c.failed + c.undecided + c.skipped == 0);
}

TEST_CASE("negated check fails with a reproduction bundle") {
  SuiteConfig sc;
  sc.instances = 3;
  sc.negate = "a";
  auto r = run_suite(sc);
  CHECK_FALSE(r.pass());
  REQUIRE(r.checks.front().id == "a");
  CHECK(r.checks.front().failed == 3);
  const auto& bundle = r.checks.front().counterexamples.front();
  CHECK(bundle["check"] == "a");
  CHECK(bundle.contains("cfg"));
  CHECK(bundle["inputs"].contains("x"));
  CHECK(report_table(r).find("FAIL") != std::string::npos);
}

TEST_CASE("suite is deterministic") {
  SuiteConfig sc;
  sc.instances = 5;
  sc.seed = 99;
  sc.cfg = RingConfig::make(3, 1, 12, 1, -4);
  CHECK(report_json(run_suite(sc), false).dump() == report_json(run_suite(sc), false).dump());
}

TEST_CASE("suite config json") {
  SuiteConfig sc;
  sc.seed = 7;
  sc.counts["g"] = 3;
  sc.only = {"a", "g"};
  sc.depth = 4;
  nlohmann::json j = sc;
  auto back = suite_config_from_json(j);
  CHECK(back.seed == 7);
  CHECK(back.count_for("g") == 3);
  CHECK(back.count_for("a") == sc.instances);
  CHECK(back.effective_depth() == 4);
  auto r = run_suite(back);
  CHECK(r.checks.size() == 2);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"max_rank": 9})")), Error);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"seed": "x"})")), Error);
}
