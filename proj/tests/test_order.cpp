#include <doctest.h>

#include "cbpv/lang/printer.hpp"
#include "cbpv/laws/generator.hpp"
#include "cbpv/order/order.hpp"
#include "support.hpp"

using namespace cbpv;
using namespace cbpv::test;

namespace {

Outcome pure_out(std::uint64_t c, Val v) {
  return {CostMonoid::SeqNat, Ty::nat(), PureOut{res(c, std::move(v))}};
}

Outcome nd(std::vector<Result> rs, TyPtr ty = Ty::boolean()) {
  Outcome o{CostMonoid::SeqNat, std::move(ty), NonDetOut{std::move(rs)}};
  normalize(o);
  return o;
}

Outcome dist(std::vector<std::pair<std::uint64_t, Rational>> cw) {
  ProbOut d;
  for (auto& [c, w] : cw) d.dist.push_back({res(c, Val::unit()), w});
  Outcome o{CostMonoid::SeqNat, Ty::unit(), d};
  normalize(o);
  return o;
}

}  // namespace

TEST_CASE("pure: cost order with equal values") {
  Val l = Val::nat_list({1, 2});
  CHECK(leq_outcome(pure_out(2, l), pure_out(3, l)).holds);
  Verdict v = leq_outcome(pure_out(3, l), pure_out(2, l));
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK_FALSE(v.witness->explanation.empty());
  CHECK_FALSE(leq_outcome(pure_out(0, Val::nat(1)), pure_out(5, Val::nat(2))).holds);
}

TEST_CASE("nondet: Egli-Milner") {
  auto t = Val::boolean(true), f = Val::boolean(false);
  CHECK(leq_outcome(nd({res(3, t), res(12, f)}), nd({res(12, t), res(12, f)})).holds);
  CHECK_FALSE(leq_outcome(nd({res(12, t), res(12, f)}), nd({res(3, t), res(12, f)})).holds);
  // empty relates only to empty
  CHECK_FALSE(leq_outcome(nd({}, Ty::unit()), nd({res(0, Val::unit())}, Ty::unit())).holds);
  CHECK_FALSE(leq_outcome(nd({res(0, Val::unit())}, Ty::unit()), nd({}, Ty::unit())).holds);
  CHECK(leq_outcome(nd({}, Ty::unit()), nd({}, Ty::unit())).holds);
}

TEST_CASE("prob: coupling order") {
  Outcome bin1 = dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  Outcome point1 = dist({{1, Rational(1)}});
  CHECK(leq_outcome(bin1, point1).holds);
  CHECK_FALSE(leq_outcome(point1, bin1).holds);
  CHECK(cdf_dominance(prob(bin1), prob(point1)));
  CHECK(coupling_by_flow(prob(bin1), prob(point1), CostMonoid::SeqNat));
  CHECK_FALSE(coupling_by_flow(prob(point1), prob(bin1), CostMonoid::SeqNat));
}

TEST_CASE("transportation oracle") {
  auto leq = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    return [a, b](std::size_t i, std::size_t j) { return a[i] <= b[j]; };
  };
  CHECK(transportation_oracle({Rational(1)}, {Rational(1)}, leq({0}, {0})));
  CHECK(transportation_oracle({Rational(1, 2), Rational(1, 2)}, {Rational(1)}, leq({0, 1}, {1})));
  CHECK_FALSE(
      transportation_oracle({Rational(1)}, {Rational(1, 2), Rational(1, 2)}, leq({1}, {0, 1})));
  CHECK_FALSE(transportation_oracle({Rational(1)}, {Rational(1, 2)}, leq({0}, {0})));
  // A plan exists only by splitting the middle mass.
  CHECK(transportation_oracle({Rational(1, 3), Rational(1, 3), Rational(1, 3)},
                              {Rational(1, 2), Rational(1, 2)},
                              [](std::size_t i, std::size_t j) { return i <= j + 1 && j <= i; }));
}

TEST_CASE("state: pointwise") {
  Program a = program("#effect state:nat\n#cost seq\n(the (F nat) (get (s (step s (ret s)))))");
  Program b = program("#effect state:nat\n#cost seq\n(the (F nat) (get (s (step 8 (ret s)))))");
  Program c = program("#effect state:nat\n#cost seq\n(the (F nat) (get (s (set 0 (ret s)))))");
  DomainConfig cfg;
  CHECK(leq_program(a, b, EvalMode::CostCounting, cfg).holds);
  CHECK_FALSE(leq_program(b, a, EvalMode::CostCounting, cfg).holds);
  CHECK_FALSE(leq_program(a, c, EvalMode::CostCounting, cfg).holds);
}

TEST_CASE("eq_outcome") {
  Program s = find_spec("state-equal")->program;
  Program b = find_spec("state-equal")->bound;
  CHECK(eq_outcome(eval(s, EvalMode::CostCounting), eval(b, EvalMode::CostCounting)).holds);
  Outcome o = apply("binomial", {Val::nat(3)});
  CHECK(eq_outcome(o, o).holds);
}

TEST_CASE("sublist; ret tt = binomial |l|") {
  const BoundSpec& spec = *find_spec("sublist-binomial");
  DomainConfig cfg = spec.domain({});
  CHECK(cfg.list_len == 8);
  CHECK(cfg.elems == 2);
  TabulatedCheck t = check_programs(spec.program, spec.bound, Judgment::Eq,
                                    EvalMode::CostCounting, cfg);
  CHECK(t.verdict.holds);
  CHECK(t.inputs == 511);
}

TEST_CASE("leq_program: insertion sort bounds") {
  DomainConfig cfg;
  const BoundSpec& up = *find_spec("isort-upper");
  const BoundSpec& lo = *find_spec("isort-lower");
  CHECK(leq_program(up.program, up.bound, EvalMode::CostCounting, cfg).holds);
  CHECK(leq_program(lo.bound, lo.program, EvalMode::CostCounting, cfg).holds);
  CHECK_FALSE(leq_program(up.bound, up.program, EvalMode::CostCounting, cfg).holds);
}

TEST_CASE("leq_program is reflexive on the corpus") {
  for (const auto& spec : corpus()) {
    if (spec.hypothesis) continue;
    CAPTURE(spec.name);
    DomainConfig cfg = spec.domain ? spec.domain({}) : DomainConfig{};
    cfg.list_len = std::min<std::size_t>(cfg.list_len, 4);
    CHECK(leq_program(spec.program, spec.program, EvalMode::CostCounting, cfg).holds);
    CHECK(ext_equal_program(spec.bound, spec.bound, cfg).holds);
  }
}

TEST_CASE("ext_equal_program") {
  DomainConfig cfg;
  CHECK(ext_equal_program(library_program("isort"), library_program("msort"), cfg).holds);
  // if i < |l| then step^i (ret l[i]) else fail
  const Program& bound = find_spec("lookup-upper")->bound;
  CHECK(ext_equal_program(library_program("lookup"), bound, cfg).holds);
  // Returning 0 out of range instead of failing is a different behaviour.
  Program total = program(
      "#effect nondet\n#cost seq\n(the (-> (list nat) nat (F nat))\n"
      "(lam l (listrec l (lam (i : nat) (ret 0)) (x xs ih (lam i (natrec i (ret x) (j jh (ih j))))))))");
  Verdict v = ext_equal_program(library_program("lookup"), total, cfg);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->input == std::vector<Val>{Val::nil(), Val::nat(0)});
}

TEST_CASE("theory and type mismatches are errors") {
  Program a = program("#effect nondet\n#cost seq\n(the (F unit) (ret tt))");
  Program b = program("#effect pure\n#cost seq\n(the (F unit) (ret tt))");
  Program c = program("#effect nondet\n#cost seq\n(the (F nat) (ret 0))");
  CHECK_THROWS_AS(leq_program(a, b, EvalMode::CostCounting, {}), OrderError);
  CHECK_THROWS_AS(leq_program(a, c, EvalMode::CostCounting, {}), OrderError);
  CHECK_THROWS_AS(leq_outcome(eval(a, EvalMode::CostCounting), eval(b, EvalMode::CostCounting)),
                  OrderError);
}

TEST_CASE("step monotonicity and monotonicity under bind") {
  const EffectTheory theories[] = {EffectTheory::nondet(), EffectTheory::prob(),
                                   EffectTheory::state_of(Ty::nat())};
  DomainConfig cfg;
  cfg.state_max = 3;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const EffectTheory& th = theories[seed % 3];
    TermGenerator gen(seed, th, CostMonoid::SeqNat);
    TyPtr a = gen.base_type();
    TyPtr ty = Ty::ret(a);
    TermPtr e = gen.computation(ty);
    Cost c1 = gen.cost();
    Cost c2 = c1 + gen.cost();
    auto prog = [&](TermPtr t, TyPtr t_ty) {
      return Program{"t", th, CostMonoid::SeqNat, std::move(t), std::move(t_ty)};
    };
    Program lo = prog(Term::step(c1, e), ty);
    Program hi = prog(Term::step(c2, e), ty);
    CAPTURE(print_term(*e));
    CHECK(leq_program(lo, hi, EvalMode::CostCounting, cfg).holds);

    // A generated continuation f, applied after both sides.
    TyPtr b = gen.base_type();
    Binder x{"x", a};
    Ctx ctx = Ctx{}.extended("x", a);
    TermPtr f = gen.computation(Ty::ret(b), ctx);
    Program blo = prog(Term::bind(lo.body, x, f), Ty::ret(b));
    Program bhi = prog(Term::bind(hi.body, x, f), Ty::ret(b));
    CHECK(leq_program(blo, bhi, EvalMode::CostCounting, cfg).holds);
  }
}
