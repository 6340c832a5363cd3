#include <doctest.h>

#include "cbpv/lang/printer.hpp"
#include "cbpv/laws/generator.hpp"
#include "support.hpp"

using namespace cbpv;

TEST_CASE("parse: smallest program") {
  Program p = parse_program("#effect pure\n#cost seq\n(the (F nat) (ret zero))");
  CHECK(p.body->kind() == TermKind::Ret);
  CHECK(p.body->kid(0)->kind() == TermKind::Zero);
  CHECK(ty_equal(*p.declared_ty, *Ty::ret(Ty::nat())));
  CHECK(p.theory.kind == EffectKind::Pure);
  CHECK(p.monoid == CostMonoid::SeqNat);
}

TEST_CASE("parse: double has a charged successor branch") {
  Program p = parse_program(library_source("double"));
  const Term& lam = *p.body;
  REQUIRE(lam.kind() == TermKind::Lam);
  const Term& rec = *lam.kid(0);
  REQUIRE(rec.kind() == TermKind::NatRec);
  const Term& succ = *rec.kid(2);
  REQUIRE(succ.kind() == TermKind::Step);
  CHECK(succ.kid(0)->kind() == TermKind::CostLit);
  CHECK(succ.kid(0)->cost() == Cost::units(1));
  const Term& bind = *succ.kid(1);
  REQUIRE(bind.kind() == TermKind::Bind);
  const Term& ret = *bind.kid(1);
  REQUIRE(ret.kind() == TermKind::Ret);
  CHECK(ret.kid(0)->kind() == TermKind::Suc);
  CHECK(ret.kid(0)->kid(0)->kind() == TermKind::Suc);
}

TEST_CASE("parse: bernoulli") {
  TermPtr t = parse_term("(flip 1/2 (ret tt) (step 1 (ret tt)))");
  REQUIRE(t->kind() == TermKind::Flip);
  CHECK(t->prob() == Rational(1, 2));
  CHECK(t->kid(0)->kind() == TermKind::Ret);
  CHECK(t->kid(0)->kid(0)->kind() == TermKind::Triv);
  CHECK(t->kid(1)->kind() == TermKind::Step);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_term("(ret"), ParseError);
  CHECK_THROWS_AS(parse_term("(flip 3/2 (ret tt) (ret tt))"), ParseError);
  CHECK_THROWS_AS(parse_program("#effect pure\n#cost seq\n(the (F unit) (branch (ret tt) (ret tt)))"),
                  ParseError);
  CHECK_THROWS_AS(parse_program("#effect nondet\n#cost seq\n(the (F unit) (par (ret tt) (ret tt)))"),
                  ParseError);
  CHECK_THROWS_AS(parse_program("#effect pure\n#cost seq\n(the (F unit) (step (cost 2 1) (ret tt)))"),
                  ParseError);
  try {
    parse_term("(ret\n  (suc ))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2:") != std::string::npos);
  }
}

TEST_CASE("print") {
  CHECK(print_term(*parse_term("(ret zero)")) == "(ret zero)");
  CHECK(print_term(*parse_term("(step 0 (ret tt))")) == "(step 0 (ret tt))");
  CHECK(print_term(*parse_term("(flip 2/4 (ret tt) (ret tt))")) == "(flip 1/2 (ret tt) (ret tt))");
}

TEST_CASE("print round-trips library programs") {
  for (const auto& name : library_names()) {
    CAPTURE(name);
    Program p = parse_program(library_source(name));
    Program q = parse_program(print(p));
    CHECK(alpha_equivalent(*p.body, *q.body));
    CHECK(ty_equal(*p.declared_ty, *q.declared_ty));
  }
}

TEST_CASE("print round-trips generated programs") {
  const EffectTheory theories[] = {EffectTheory::pure(), EffectTheory::nondet(),
                                   EffectTheory::prob(), EffectTheory::state_of(Ty::nat())};
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const EffectTheory& th = theories[seed % 4];
    CostMonoid m = th.kind == EffectKind::Pure && seed % 8 == 0 ? CostMonoid::ParWorkSpan
                                                                : CostMonoid::SeqNat;
    TermGenerator gen(seed, th, m);
    TyPtr ty = seed % 3 == 0 ? Ty::arrow(Ty::nat(), Ty::ret(gen.base_type()))
                             : Ty::ret(gen.base_type());
    Program p{"gen", th, m, gen.computation(ty), ty};
    std::string text = print(p);
    CAPTURE(text);
    Program q = parse_program(text);
    CHECK(alpha_equivalent(*p.body, *q.body));
    CHECK(print(q) == text);
  }
}

TEST_CASE("alpha equivalence ignores binder names only") {
  CHECK(alpha_equivalent(*parse_term("(bind (ret 1) (x (ret x)))"),
                         *parse_term("(bind (ret 1) (y (ret y)))")));
  CHECK_FALSE(alpha_equivalent(*parse_term("(bind (ret 1) (x (ret x)))"),
                               *parse_term("(bind (ret 1) (y (ret 1)))")));
}

TEST_CASE("types: list annotation defaults to zero") {
  TyPtr t = parse_type("(list nat)");
  CHECK(t->annotation() == Cost::zero());
  CHECK(parse_type("(list 2 nat)")->annotation() == Cost::units(2));
  CHECK_THROWS(parse_type("(F (F nat))"));
  CHECK_THROWS(parse_type("(U nat)"));
  CHECK_THROWS(parse_type("(-> (F nat) (F nat))"));
}
