#include <doctest.h>

#include <algorithm>

#include "cbpv/order/order.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/laws/generator.hpp"
#include "support.hpp"

using namespace cbpv;
using namespace cbpv::test;

TEST_CASE("double 3") {
  Outcome o = apply("double", {Val::nat(3)});
  CHECK(pure_result(o) == res(3, Val::nat(6)));
}

TEST_CASE("insert 1 [0, 2]: two comparisons") {
  Outcome o = apply("insert", {Val::nat(1), Val::nat_list({0, 2})});
  CHECK(pure_result(o) == res(2, Val::nat_list({0, 1, 2})));
}

TEST_CASE("pervasive nondeterminism") {
  Program p = program("#effect nondet\n#cost seq\n"
                      "(the (F bool) (branch (step 3 (ret true)) (step 12 (ret false))))");
  Outcome o = eval(p, EvalMode::CostCounting);
  std::vector<Result> expected{res(3, Val::boolean(true)), res(12, Val::boolean(false))};
  CHECK(nondet(o).branches == expected);
}

TEST_CASE("fail and idempotence") {
  Program f = program("#effect nondet\n#cost seq\n(the (F unit) (step 4 fail))");
  CHECK(nondet(eval(f, EvalMode::CostCounting)).branches.empty());
  Program d = program("#effect nondet\n#cost seq\n(the (F nat) (branch (ret 1) (ret 1)))");
  CHECK(nondet(eval(d, EvalMode::CostCounting)).branches.size() == 1);
}

TEST_CASE("bernoulli and binomial 2") {
  Outcome b = eval(library_program("bernoulli"), EvalMode::CostCounting);
  REQUIRE(prob(b).dist.size() == 2);
  CHECK(prob(b).dist[0].result == res(0, Val::unit()));
  CHECK(prob(b).dist[0].weight == Rational(1, 2));
  CHECK(prob(b).dist[1].result == res(1, Val::unit()));
  CHECK(prob(b).dist[1].weight == Rational(1, 2));

  Outcome o = apply("binomial", {Val::nat(2)});
  const auto& d = prob(o).dist;
  REQUIRE(d.size() == 3);
  const Rational expected[] = {Rational(1, 4), Rational(1, 2), Rational(1, 4)};
  for (std::uint64_t c = 0; c < 3; ++c) {
    CHECK(d[c].result == res(c, Val::unit()));
    CHECK(d[c].weight == expected[c]);
  }
}

TEST_CASE("flip selects its second argument with probability p") {
  Program p = program("#effect prob\n#cost seq\n(the (F nat) (flip 1/3 (ret 0) (ret 1)))");
  Outcome out = eval(p, EvalMode::CostCounting);
  const auto& d = prob(out).dist;
  REQUIRE(d.size() == 2);
  CHECK(d[0].result.value == Val::nat(0));
  CHECK(d[0].weight == Rational(2, 3));
  CHECK(d[1].weight == Rational(1, 3));
}

TEST_CASE("weights sum to one") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TermGenerator gen(seed, EffectTheory::prob(), CostMonoid::SeqNat);
    TyPtr ty = Ty::ret(gen.base_type());
    Program p{"gen", EffectTheory::prob(), CostMonoid::SeqNat, gen.computation(ty), ty};
    Rational total = 0;
    for (const auto& w : prob(eval(p, EvalMode::CostCounting)).dist) {
      CHECK(w.weight > 0);
      total += w.weight;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("state: cost depends on the initial state") {
  Program p = program("#effect state:nat\n#cost seq\n"
                      "(the (F nat) (get (n (set (suc (suc zero)) (step n (ret n))))))");
  DomainConfig cfg;
  cfg.state_max = 4;
  Outcome out = eval(p, EvalMode::CostCounting, cfg);
  const auto& table = state(out).table;
  REQUIRE(table.size() == 5);
  for (std::uint64_t n = 0; n < 5; ++n) {
    CHECK(table[n].init == Val::nat(n));
    CHECK(table[n].cost == Cost::units(n));
    CHECK(table[n].final_state == Val::nat(2));
    CHECK(table[n].value == Val::nat(n));
  }
}

TEST_CASE("state example: get n. set 2n; step^n (ret n)") {
  Program p = find_spec("state-equal")->bound;
  DomainConfig cfg;
  cfg.state_max = 4;
  Outcome out = eval(p, EvalMode::CostCounting, cfg);
  const auto& table = state(out).table;
  REQUIRE(table.size() == 5);
  for (std::uint64_t n = 0; 2 * n <= 4; ++n) {
    CHECK(table[n].cost == Cost::units(n));
    CHECK(table[n].final_state == Val::nat(2 * n));
    CHECK(table[n].value == Val::nat(n));
  }
  cfg.strict_states = true;
  CHECK_THROWS_AS(eval(p, EvalMode::CostCounting, cfg), EvalError);
}

TEST_CASE("extensional mode") {
  Outcome o = eval_applied(library_program("double"), {Val::nat(3)}, EvalMode::Extensional);
  CHECK(pure_result(o) == res(0, Val::nat(6)));
  Outcome b = eval_applied(library_program("binomial"), {Val::nat(3)}, EvalMode::Extensional);
  REQUIRE(prob(b).dist.size() == 1);
  CHECK(prob(b).dist[0].weight == 1);
}

TEST_CASE("extensional outcomes are cost-counting outcomes with costs erased") {
  const EffectTheory theories[] = {EffectTheory::pure(), EffectTheory::nondet(),
                                   EffectTheory::prob(), EffectTheory::state_of(Ty::nat())};
  DomainConfig cfg;
  cfg.state_max = 3;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const EffectTheory& th = theories[seed % 4];
    TermGenerator gen(seed, th, CostMonoid::SeqNat);
    TyPtr ty = Ty::ret(gen.base_type());
    Program p{"gen", th, CostMonoid::SeqNat, gen.computation(ty), ty};
    Outcome c = eval(p, EvalMode::CostCounting, cfg);
    Outcome e = eval(p, EvalMode::Extensional, cfg);
    CAPTURE(print(p));
    CHECK(to_string(erase_costs(c)) == to_string(e));
  }
}

TEST_CASE("par: work adds, span maxes") {
  Program p = program("#effect pure\n#cost par\n"
                      "(the (F (* nat bool)) (par (step 2 (ret 4)) (step 3 (ret true))))");
  Outcome o = eval(p, EvalMode::CostCounting);
  CHECK(pure_result(o).cost == Cost::of(5, 3));
  CHECK(pure_result(o).value == Val::pair(Val::nat(4), Val::boolean(true)));
}

TEST_CASE("list recursor charges its annotation per cons") {
  Program p = program("#effect pure\n#cost seq\n"
                      "(the (-> (list 2 nat) (F nat)) (lam l (listrec l (ret 0) (x xs ih ih))))");
  Outcome o = eval_applied(p, {Val::nat_list({5, 6, 7})}, EvalMode::CostCounting);
  CHECK(pure_result(o).cost == Cost::units(6));
}

TEST_CASE("eval_fn: double") {
  Program d = library_program("double");
  auto table = eval_fn(d, EvalMode::CostCounting, {}, {Val::nat(0), Val::nat(1), Val::nat(2)});
  REQUIRE(table.size() == 3);
  for (std::uint64_t n = 0; n < 3; ++n) {
    CHECK(table[n].first == Val::nat(n));
    CHECK(pure_result(table[n].second) == res(n, Val::nat(2 * n)));
  }
  CHECK(eval_fn(d, EvalMode::CostCounting, {}, {}).empty());
}

TEST_CASE("eval_fn: isort on lists of length <= 3 over {0,1,2}") {
  DomainConfig cfg;
  cfg.list_len = 3;
  cfg.elems = 3;
  auto lists = enumerate(*parse_type("(list nat)"), cfg);
  auto table = eval_fn(library_program("isort"), EvalMode::CostCounting, cfg, lists);
  REQUIRE(table.size() == 40);
  for (const auto& [in, out] : table) {
    std::vector<std::uint64_t> xs;
    for (const auto& v : in.items()) xs.push_back(v.as_nat());
    std::sort(xs.begin(), xs.end());
    const Result& r = pure_result(out);
    CHECK(r.value == Val::nat_list(xs));
    CHECK(r.cost.work <= 9);
  }
}

TEST_CASE("step laws hold semantically") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TermGenerator gen(seed, EffectTheory::nondet(), CostMonoid::SeqNat);
    TyPtr ty = Ty::ret(gen.base_type());
    TermPtr e = gen.computation(ty);
    auto ev = [&](const TermPtr& t) {
      return to_string(eval(Program{"t", EffectTheory::nondet(), CostMonoid::SeqNat, t, ty},
                            EvalMode::CostCounting));
    };
    CHECK(ev(Term::step(Cost::zero(), e)) == ev(e));
    CHECK(ev(Term::step(Cost::units(2), Term::step(Cost::units(3), e))) ==
          ev(Term::step(Cost::units(5), e)));
  }
}

TEST_CASE("nondet outcomes keep the extreme costs of each value") {
  Program p = program("#effect nondet\n#cost seq\n"
                      "(the (F bool) (branch (ret true) (branch (step 1 (ret true))"
                      " (branch (step 3 (ret true)) (step 2 (ret false))))))");
  Outcome o = eval(p, EvalMode::CostCounting);
  CHECK(nondet(o).branches ==
        std::vector<Result>{res(0, Val::boolean(true)), res(2, Val::boolean(false)),
                            res(3, Val::boolean(true))});
  Program q = program("#effect nondet\n#cost seq\n"
                      "(the (F bool) (branch (ret true) (branch (step 2 (ret false)) (step 3 (ret true)))))");
  CHECK(eq_outcome(o, eval(q, EvalMode::CostCounting)));
}
