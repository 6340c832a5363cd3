#include <doctest.h>

#include <set>

#include "cbpv/laws/law.hpp"

using namespace cbpv;

TEST_CASE("catalog") {
  const auto& laws = catalog();
  CHECK(laws.size() == 25);
  std::set<std::string> names;
  for (const auto& l : laws) names.insert(l.name);
  CHECK(names.size() == 25);

  const Law* comm = find_law("branch/comm");
  REQUIRE(comm);
  CHECK(comm->lhs == "(branch e0 e1)");
  CHECK(comm->rhs == "(branch e1 e0)");
  const Law* step0 = find_law("step0");
  REQUIRE(step0);
  CHECK(step0->lhs == "(step 0 e)");
  CHECK(step0->rhs == "e");
  CHECK(find_law("no-such-law") == nullptr);
}

TEST_CASE("flip/assoc side condition is executable") {
  const Law* law = find_law("flip/assoc");
  REQUIRE(law);
  REQUIRE(law->params);
  REQUIRE(law->side_condition);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    ParamMap m = law->params(rng, CostMonoid::SeqNat);
    REQUIRE(law->side_condition(m));
    Rational p = std::get<Rational>(m.at("p"));
    Rational q = std::get<Rational>(m.at("q"));
    Rational r = std::get<Rational>(m.at("r"));
    Rational pq = std::get<Rational>(m.at("pq"));
    CHECK(p == 1 - (1 - pq) * (1 - r));
    CHECK(pq == p * q);
    CHECK(q >= 0);
    CHECK(q <= 1);
  }
  ParamMap bad{{"p", Rational(1, 2)}, {"q", Rational(1, 2)}, {"r", Rational(1, 2)},
               {"pq", Rational(1, 4)}};
  CHECK_FALSE(law->side_condition(bad));
}

TEST_CASE("get/set and step0 hold") {
  LawReport gs = check_law(*find_law("get/set"), 200, 1);
  CHECK(gs.trials == 200);
  CHECK(gs.passed());
  CHECK(check_law(*find_law("step0"), 200, 3).passed());
}

TEST_CASE("every mutation fixture is caught with a witness") {
  CHECK(mutation_fixtures().size() == 5);
  for (const auto& law : mutation_fixtures()) {
    CAPTURE(law.name);
    LawReport r = check_law(law, 500, 1);
    CHECK_FALSE(r.passed());
    REQUIRE_FALSE(r.failures.empty());
    CHECK_FALSE(r.failures.front().instance.empty());
  }
}

TEST_CASE("reports are deterministic in the seed") {
  const Law& m = mutation_fixtures().front();
  LawReport a = check_law(m, 100, 42);
  LawReport b = check_law(m, 100, 42);
  CHECK(a.failed == b.failed);
  REQUIRE_FALSE(a.failures.empty());
  CHECK(a.failures.front().instance == b.failures.front().instance);
}

TEST_CASE("laws hold in extensional mode") {
  for (const auto& law : catalog()) {
    CAPTURE(law.name);
    CHECK(check_law(law, 100, 5, EvalMode::Extensional).passed());
  }
}

TEST_CASE("unsatisfiable side condition exhausts the generator") {
  Law l = *find_law("step0");
  l.side_condition = [](const ParamMap&) { return false; };
  CHECK_THROWS_AS(check_law(l, 1, 1), GeneratorExhausted);
}
