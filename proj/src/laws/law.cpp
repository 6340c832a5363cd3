#include "cbpv/laws/law.hpp"

#include <array>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "cbpv/laws/generator.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/order/order.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

namespace {

Cost draw_cost(std::mt19937_64& rng, CostMonoid m) {
  std::uniform_int_distribution<std::uint64_t> d(0, 5);
  if (m == CostMonoid::SeqNat) return Cost::units(d(rng));
  return Cost::of(d(rng), d(rng));
}

Rational draw_probability(std::mt19937_64& rng) {
  static const Rational pool[] = {Rational(0),    Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                  Rational(2, 3), Rational(3, 4), Rational(1)};
  return pool[std::uniform_int_distribution<int>(0, 6)(rng)];
}

ParamMap no_params(std::mt19937_64&, CostMonoid) { return {}; }

ParamMap one_cost(std::mt19937_64& rng, CostMonoid m) { return {{"c", draw_cost(rng, m)}}; }

ParamMap two_costs(std::mt19937_64& rng, CostMonoid m) {
  Cost c1 = draw_cost(rng, m);
  Cost c2 = draw_cost(rng, m);
  return {{"c1", c1}, {"c2", c2}, {"c1+c2", c1 + c2}};
}

ParamMap one_prob(std::mt19937_64& rng, CostMonoid) {
  Rational p = draw_probability(rng);
  return {{"p", p}, {"1-p", Rational(1 - p)}};
}

ParamMap prob_and_cost(std::mt19937_64& rng, CostMonoid m) {
  ParamMap out = one_prob(rng, m);
  out.emplace("c", draw_cost(rng, m));
  return out;
}

// pq and r are free; p and q follow from them.
ParamMap flip_assoc(std::mt19937_64& rng, CostMonoid) {
  Rational pq = draw_probability(rng);
  Rational r = draw_probability(rng);
  Rational p = 1 - (1 - pq) * (1 - r);
  Rational q = p == 0 ? draw_probability(rng) : Rational(pq / p);
  return {{"pq", pq}, {"r", r}, {"p", p}, {"q", q}};
}

const Rational& rat(const ParamMap& m, const char* k) { return std::get<Rational>(m.at(k)); }

bool flip_assoc_condition(const ParamMap& m) {
  const Rational& p = rat(m, "p");
  const Rational& q = rat(m, "q");
  const Rational& pq = rat(m, "pq");
  const Rational& r = rat(m, "r");
  for (const Rational* x : {&p, &q, &pq, &r}) {
    if (*x < 0 || *x > 1) return false;
  }
  return p * q == pq && p == 1 - (1 - pq) * (1 - r);
}

Law law(std::string name, std::optional<EffectKind> theory, std::string lhs, std::string rhs,
        std::vector<MetaVar> metas,
        std::function<ParamMap(std::mt19937_64&, CostMonoid)> params = no_params) {
  Law l;
  l.name = std::move(name);
  l.theory = theory;
  l.lhs = std::move(lhs);
  l.rhs = std::move(rhs);
  l.metas = std::move(metas);
  l.params = std::move(params);
  return l;
}

MetaVar comp(const char* n) { return {n, MetaSort::Comp}; }

std::vector<Law> build_catalog() {
  const auto nd = EffectKind::NonDet;
  const auto pr = EffectKind::Prob;
  const auto st = EffectKind::State;
  std::vector<Law> out;

  out.push_back(law("step0", std::nullopt, "(step 0 e)", "e", {comp("e")}));
  out.push_back(law("step+", std::nullopt, "(step c1 (step c2 e))", "(step c1+c2 e)",
                    {comp("e")}, two_costs));
  out.push_back(law("bind_step", std::nullopt, "(bind (step c e) (x (f x)))",
                    "(step c (bind e (x (f x))))",
                    {{"e", MetaSort::Producer}, {"f", MetaSort::Fun}}, one_cost));
  {
    Law l = law("lam_step", std::nullopt, "(lam x (step c (f x)))", "(step c f)",
                {{"f", MetaSort::Fun}}, one_cost);
    l.function_typed = true;
    out.push_back(std::move(l));
  }

  out.push_back(law("branch/idl", nd, "(branch fail e)", "e", {comp("e")}));
  out.push_back(law("branch/idr", nd, "(branch e fail)", "e", {comp("e")}));
  out.push_back(law("branch/assoc", nd, "(branch (branch e0 e1) e2)", "(branch e0 (branch e1 e2))",
                    {comp("e0"), comp("e1"), comp("e2")}));
  out.push_back(law("branch/comm", nd, "(branch e0 e1)", "(branch e1 e0)", {comp("e0"), comp("e1")}));
  out.push_back(law("branch/idem", nd, "(branch e e)", "e", {comp("e")}));
  out.push_back(law("branch/step", nd, "(step c (branch e0 e1))",
                    "(branch (step c e0) (step c e1))", {comp("e0"), comp("e1")}, one_cost));
  out.push_back(law("fail/step", nd, "(step c fail)", "fail", {}, one_cost));

  out.push_back(law("flip/0", pr, "(flip 0 e0 e1)", "e0", {comp("e0"), comp("e1")}));
  out.push_back(law("flip/1", pr, "(flip 1 e0 e1)", "e1", {comp("e0"), comp("e1")}));
  {
    Law l = law("flip/assoc", pr, "(flip pq (flip r e0 e1) e2)", "(flip p e0 (flip q e1 e2))",
                {comp("e0"), comp("e1"), comp("e2")}, flip_assoc);
    l.side_condition = flip_assoc_condition;
    l.note = "pq and r are drawn freely; p = 1 - (1 - pq)(1 - r) and q = pq / p";
    out.push_back(std::move(l));
  }
  out.push_back(law("flip/comm", pr, "(flip p e0 e1)", "(flip 1-p e1 e0)", {comp("e0"), comp("e1")},
                    one_prob));
  out.push_back(law("flip/idem", pr, "(flip p e e)", "e", {comp("e")}, one_prob));
  out.push_back(law("flip/step", pr, "(step c (flip p e0 e1))", "(flip p (step c e0) (step c e1))",
                    {comp("e0"), comp("e1")}, prob_and_cost));

  out.push_back(law("get/get", st, "(get (s1 (get (s2 (e s1 s2)))))", "(get (s (e s s)))",
                    {{"e", MetaSort::StateFun2}}));
  out.push_back(law("get/set", st, "(get (s (set s e)))", "e", {comp("e")}));
  out.push_back(law("set/get", st, "(set s (get (t (e t))))", "(set s (e s))",
                    {{"s", MetaSort::StateValue}, {"e", MetaSort::StateFun}}));
  out.push_back(law("set/set", st, "(set s1 (set s2 e))", "(set s2 e)",
                    {{"s1", MetaSort::StateValue}, {"s2", MetaSort::StateValue}, comp("e")}));
  out.push_back(law("get/step", st, "(step c (get (s (e s))))", "(get (s (step c (e s))))",
                    {{"e", MetaSort::StateFun}}, one_cost));
  out.push_back(law("set/step", st, "(step c (set s e))", "(set s (step c e))",
                    {{"s", MetaSort::StateValue}, comp("e")}, one_cost));

  out.push_back(law("bind/ret", std::nullopt, "(bind (ret a) (x (f x)))", "(f a)",
                    {{"a", MetaSort::Value}, {"f", MetaSort::Fun}}));
  out.push_back(law("bind/assoc", std::nullopt, "(bind (bind e (x (f x))) (y (g y)))",
                    "(bind e (x (bind (f x) (y (g y)))))",
                    {{"e", MetaSort::Producer}, {"f", MetaSort::FunAB}, {"g", MetaSort::FunB}}));
  return out;
}

std::vector<Law> build_mutations() {
  std::vector<Law> out;
  auto mutate = [&](const char* name, std::string lhs, std::string rhs) {
    Law l = *find_law(name);
    l.lhs = std::move(lhs);
    l.rhs = std::move(rhs);
    l.note = "mutant";
    out.push_back(std::move(l));
  };
  mutate("flip/1", "(flip 1 e0 e1)", "e0");
  mutate("step+", "(step c1 (step c2 e))", "(step c1 e)");
  mutate("branch/idl", "(branch fail e)", "fail");
  mutate("set/set", "(set s1 (set s2 e))", "(set s1 e)");
  mutate("flip/comm", "(flip p e0 e1)", "(flip p e1 e0)");
  return out;
}

struct Instance {
  TyPtr a, b, x;
  TyPtr s = Ty::nat();
};

TyPtr meta_type(MetaSort sort, const Instance& in) {
  switch (sort) {
    case MetaSort::Comp: return Ty::thunk(in.x);
    case MetaSort::Producer: return Ty::thunk(Ty::ret(in.a));
    case MetaSort::Fun: return Ty::thunk(Ty::arrow(in.a, in.x));
    case MetaSort::FunAB: return Ty::thunk(Ty::arrow(in.a, Ty::ret(in.b)));
    case MetaSort::FunB: return Ty::thunk(Ty::arrow(in.b, in.x));
    case MetaSort::StateFun: return Ty::thunk(Ty::arrow(in.s, in.x));
    case MetaSort::StateFun2: return Ty::thunk(Ty::arrow(in.s, Ty::arrow(in.s, in.x)));
    case MetaSort::Value: return in.a;
    case MetaSort::StateValue: return in.s;
  }
  return nullptr;
}

std::string show_params(const ParamMap& m, CostMonoid monoid) {
  std::vector<std::string> parts;
  for (const auto& [k, v] : m) {
    if (const auto* r = std::get_if<Rational>(&v)) {
      parts.push_back(fmt::format("{} = {}", k, to_string(*r)));
    } else {
      parts.push_back(fmt::format("{} = {}", k, to_string(monoid, std::get<Cost>(v))));
    }
  }
  return fmt::format("{}", fmt::join(parts, ", "));
}

}  // namespace

const std::vector<Law>& catalog() {
  static const std::vector<Law> laws = build_catalog();
  return laws;
}

const std::vector<Law>& mutation_fixtures() {
  static const std::vector<Law> laws = build_mutations();
  return laws;
}

const Law* find_law(std::string_view name) {
  for (const auto& l : catalog()) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

DomainConfig law_domain() {
  DomainConfig d;
  d.nat_max = 3;
  d.list_len = 2;
  d.elems = 3;
  d.state_max = 3;
  return d;
}

LawReport check_law(const Law& law, std::size_t trials, std::uint64_t seed, EvalMode mode) {
  static const EffectKind all[] = {EffectKind::Pure, EffectKind::NonDet, EffectKind::Prob,
                                   EffectKind::State};
  std::vector<EffectKind> theories;
  if (law.theory) {
    theories.push_back(*law.theory);
  } else {
    theories.assign(std::begin(all), std::end(all));
  }
  const DomainConfig dom = law_domain();

  LawReport report;
  report.law = law.name;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    EffectKind kind = theories[trial % theories.size()];
    EffectTheory theory = kind == EffectKind::State ? EffectTheory::state_of(Ty::nat())
                                                    : EffectTheory{kind, nullptr};
    bool par = kind == EffectKind::Pure && (trial / theories.size()) % 2 == 1;
    CostMonoid monoid = par ? CostMonoid::ParWorkSpan : CostMonoid::SeqNat;

    std::seed_seq sseq{seed, static_cast<std::uint64_t>(trial), std::uint64_t{0x1a5}};
    std::array<std::uint32_t, 2> words{};
    sseq.generate(words.begin(), words.end());
    const std::uint64_t trial_seed = (std::uint64_t{words[0]} << 32) | words[1];
    GenOptions gopts;
    gopts.max_depth = 1 + static_cast<int>(trial_seed % 6);
    TermGenerator gen(trial_seed, theory, monoid, gopts);

    Instance in;
    in.a = gen.base_type();
    in.b = gen.base_type();
    in.x = Ty::ret(gen.base_type());
    TyPtr ty = law.function_typed ? Ty::arrow(in.a, in.x) : in.x;

    ParamMap params;
    bool drawn = false;
    for (int attempt = 0; attempt < 1000 && !drawn; ++attempt) {
      params = law.params ? law.params(gen.rng(), monoid) : ParamMap{};
      drawn = !law.side_condition || law.side_condition(params);
    }
    if (!drawn) {
      throw GeneratorExhausted(
          fmt::format("law {}: side condition rejected 1000 parameter draws", law.name));
    }

    CheckOptions copts{theory, monoid};
    Ctx ctx;
    Env env;
    std::vector<std::string> shown;
    for (const auto& m : law.metas) {
      TyPtr mt = meta_type(m.sort, in);
      ctx = ctx.extended(m.name, mt);
      if (mt->kind() == TyKind::U) {
        TermPtr t = elaborate_check(Ctx{}, gen.computation(mt->inner()), mt->inner(), copts);
        env = env.extended(m.name, Val::thunk(std::make_shared<const Thunk>(
                                       Thunk{Thunk::Kind::Closure, t, Env{}, {}})));
        shown.push_back(fmt::format("{} = {}", m.name, print_term(*t)));
      } else {
        Val v = gen.element(mt, dom);
        env = env.extended(m.name, v);
        shown.push_back(fmt::format("{} = {}", m.name, to_string(v)));
      }
    }
    if (!params.empty()) shown.push_back(show_params(params, monoid));
    shown.push_back("theory " + print_theory(theory));

    TermPtr lhs = elaborate_check(ctx, parse_term(law.lhs, params), ty, copts);
    TermPtr rhs = elaborate_check(ctx, parse_term(law.rhs, params), ty, copts);

    EvalSettings settings{theory, monoid, mode, dom};
    std::vector<std::vector<Val>> inputs{{}};
    if (law.function_typed) inputs = enumerate_args({in.a}, dom);

    ++report.trials;
    for (const auto& args : inputs) {
      std::optional<LawFailure> failure;
      try {
        Outcome l = run(lhs, ty, env, args, settings);
        Outcome r = run(rhs, ty, env, args, settings);
        Verdict v = eq_outcome(l, r);
        if (!v) failure = LawFailure{{}, v.witness->lhs, v.witness->rhs, v.witness->explanation};
      } catch (const EvalError& e) {
        failure = LawFailure{{}, "", "", std::string("evaluation error: ") + e.what()};
      }
      if (failure) {
        std::string instance = fmt::format("{}", fmt::join(shown, "; "));
        if (!args.empty()) instance += "; argument " + to_string(args[0]);
        failure->instance = std::move(instance);
        ++report.failed;
        if (report.failures.size() < 5) report.failures.push_back(std::move(*failure));
        break;
      }
    }
  }
  return report;
}

}  // namespace cbpv
