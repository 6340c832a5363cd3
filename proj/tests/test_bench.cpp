#include <doctest.h>

#include <set>

#include "cbpv/bench/verify.hpp"
#include "support.hpp"

using namespace cbpv;
using namespace cbpv::test;

TEST_CASE("corpus") {
  const auto& specs = corpus();
  CHECK(specs.size() == 16);
  std::set<std::string> names;
  for (const auto& s : specs) {
    names.insert(s.name);
    CHECK(ty_equal(*s.program.declared_ty, *s.bound.declared_ty));
    CHECK(theory_equal(s.program.theory, s.bound.theory));
  }
  CHECK(names.size() == specs.size());
  const BoundSpec* up = find_spec("isort-upper");
  REQUIRE(up);
  CHECK(up->relation == Relation::LeqUpper);
  const BoundSpec* sb = find_spec("sublist-binomial");
  REQUIRE(sb);
  CHECK(sb->relation == Relation::Equal);
}

TEST_CASE("verify: isort-upper") {
  CheckReport r = verify(*find_spec("isort-upper"), RunConfig{});
  CHECK(r.status == Status::Holds);
  REQUIRE(r.max_cost);
  CHECK(r.max_cost->work == 10);
  CHECK(r.min_cost->work == 0);
  CHECK(r.inputs == 3906);
}

TEST_CASE("verify: double-equal has cost n at every n") {
  CheckReport r = verify(*find_spec("double-equal"), RunConfig{});
  CHECK(r.status == Status::Holds);
  CHECK(r.max_cost->work == 16);
  for (std::uint64_t n = 0; n <= 16; ++n) {
    CHECK(pure_result(apply("double", {Val::nat(n)})) == res(n, Val::nat(2 * n)));
  }
}

TEST_CASE("sorting specs cost nothing on the empty list") {
  RunConfig cfg;
  cfg.domain.list_len = 0;
  for (const char* name : {"isort-upper", "isort-lower", "msort-upper", "qsort-upper"}) {
    CAPTURE(name);
    CheckReport r = verify(*find_spec(name), cfg);
    CHECK(r.status == Status::Holds);
    CHECK(r.inputs == 1);
    CHECK(r.max_cost->work == 0);
  }
}

TEST_CASE("hypothesis specs admit enough witnesses") {
  for (const char* name : {"twice-upper", "map-const", "map-binomial"}) {
    CAPTURE(name);
    CheckReport r = verify(*find_spec(name), RunConfig{});
    CHECK(r.status == Status::Holds);
    REQUIRE(r.witnesses);
    CHECK(*r.witnesses >= 50);
    CHECK(*r.candidates <= 500);
  }
}

TEST_CASE("too few witnesses is inconclusive") {
  BoundSpec s = *find_spec("twice-upper");
  s.hypothesis->candidates = 10;
  CheckReport r = verify(s, RunConfig{});
  CHECK(r.status == Status::Inconclusive);
}

TEST_CASE("mutant isort breaks only the lower bound") {
  auto specs = mutated_corpus("isort");
  RunConfig cfg;
  for (const auto& s : specs) {
    if (s.name != "isort-lower" && s.name != "isort-upper") continue;
    CheckReport r = verify(s, cfg);
    if (s.name == "isort-upper") {
      CHECK(r.status == Status::Holds);
    } else {
      CHECK(r.status == Status::Fails);
      REQUIRE(r.counterexample);
      CHECK(r.counterexample->input == "[0, 0]");
    }
  }
  CHECK_THROWS(mutated_corpus("nope"));
}

TEST_CASE("reference helpers are cost-free") {
  RunConfig cfg;
  cfg.domain.list_len = 3;
  cfg.domain.nat_max = 6;
  CheckReport r = verify_helpers_cost_free(cfg);
  CHECK(r.status == Status::Holds);
}

TEST_CASE("json report") {
  CheckReport r = verify(*find_spec("lookup-upper"), RunConfig{});
  nlohmann::json j = to_json(r);
  CHECK(j["name"] == "lookup-upper");
  CHECK(j["relation"] == "leq-upper");
  CHECK(j["verdict"] == "holds");
  CHECK(j["max_cost"] == 4);
  CHECK(j["min_cost"] == 0);
  CHECK(j.contains("domain"));
  CHECK(j.contains("millis"));
  CHECK_FALSE(j.contains("counterexample"));

  auto m = mutated_corpus("isort");
  auto bad = std::find_if(m.begin(), m.end(), [](const auto& s) { return s.name == "isort-lower"; });
  nlohmann::json f = to_json(verify(*bad, RunConfig{}));
  CHECK(f["verdict"] == "fails");
  CHECK(f["counterexample"]["input"] == "[0, 0]");
}

TEST_CASE("run_all selections") {
  RunConfig cfg;
  cfg.only = "nondet-bool";
  auto reports = run_all(cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].ok());
  cfg.only = "flip/1";
  cfg.mutate = "flip/1";
  reports = run_all(cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].status == Status::Fails);
  cfg.only = "nothing";
  cfg.mutate.reset();
  CHECK_THROWS(run_all(cfg));
  cfg.only.reset();
  cfg.mutate = "nothing";
  CHECK_THROWS(run_all(cfg));
}

TEST_CASE("extensional mode turns every bound into an equality") {
  RunConfig cfg;
  cfg.mode = EvalMode::Extensional;
  cfg.domain.list_len = 4;
  for (const auto& s : corpus()) {
    CAPTURE(s.name);
    CheckReport r = verify(s, cfg);
    CHECK(r.status == Status::Holds);
    CHECK(r.relation == "ext-equal");
  }
}
