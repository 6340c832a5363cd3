#include "cbpv/laws/generator.hpp"

#include <functional>
#include <vector>

namespace cbpv {

TermGenerator::TermGenerator(std::uint64_t seed, EffectTheory theory, CostMonoid monoid,
                             GenOptions opts)
    : rng_(seed), theory_(std::move(theory)), monoid_(monoid), opts_(opts) {}

std::size_t TermGenerator::pick(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool TermGenerator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string TermGenerator::fresh() { return "v" + std::to_string(++counter_); }

TyPtr TermGenerator::base_type() {
  switch (pick(3)) {
    case 0: return Ty::unit();
    case 1: return Ty::boolean();
    default: return Ty::nat();
  }
}

Rational TermGenerator::probability() {
  static const Rational pool[] = {Rational(0),    Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                  Rational(2, 3), Rational(3, 4), Rational(1)};
  return pool[pick(7)];
}

Cost TermGenerator::cost() {
  auto draw = [&] { return std::uniform_int_distribution<std::uint64_t>(0, opts_.max_step)(rng_); };
  if (monoid_ == CostMonoid::SeqNat) return Cost::units(draw());
  return Cost::of(draw(), draw());
}

Val TermGenerator::element(const TyPtr& ty, const DomainConfig& cfg) {
  auto all = enumerate(*ty, cfg);
  return all[pick(all.size())];
}

TermPtr TermGenerator::computation(const TyPtr& ty, const Ctx& ctx) {
  return computation(ty, ctx, opts_.max_depth);
}

TermPtr TermGenerator::computation(const TyPtr& ty, const Ctx& ctx, int depth) {
  TermPtr t;
  for (int attempt = 0; attempt < 100; ++attempt) {
    t = comp_rec(ty, ctx, depth);
    if (term_size(*t) <= opts_.max_size) return t;
  }
  return comp_rec(ty, ctx, 0);
}

TermPtr TermGenerator::value(const TyPtr& ty, const Ctx& ctx, int depth) {
  return value_rec(ty, ctx, depth);
}

TermPtr TermGenerator::comp_rec(const TyPtr& ty, const Ctx& ctx, int depth) {
  if (ty->kind() == TyKind::Arrow) {
    Binder x{fresh(), ty->from()};
    return Term::lam(x, comp_rec(ty->to(), ctx.extended(x.name, x.type), depth));
  }
  const TyPtr& a = ty->inner();

  // Context variables that can stand in computation position here.
  std::vector<std::string> forceable;
  std::vector<std::pair<std::string, TyPtr>> appliable;
  for (const auto& [name, vt] : ctx.entries()) {
    if (vt->kind() != TyKind::U) continue;
    const TyPtr& c = vt->inner();
    if (ty_equal(*c, *ty)) forceable.push_back(name);
    if (c->kind() == TyKind::Arrow && ty_equal(*c->to(), *ty) && c->from()->first_order()) {
      appliable.emplace_back(name, c->from());
    }
  }

  using Gen = std::function<TermPtr()>;
  std::vector<std::pair<int, Gen>> options;
  options.emplace_back(2, [&] { return Term::ret(value_rec(a, ctx, 2)); });
  if (!forceable.empty()) {
    options.emplace_back(2, [&] { return Term::var(forceable[pick(forceable.size())]); });
  }
  if (!appliable.empty()) {
    options.emplace_back(2, [&] {
      const auto& [name, arg] = appliable[pick(appliable.size())];
      return Term::ap(Term::var(name), value_rec(arg, ctx, 1));
    });
  }
  if (depth > 0) {
    const int d = depth - 1;
    options.emplace_back(3, [&] {
      TermPtr c = Term::cost_lit(cost());
      if (monoid_ == CostMonoid::SeqNat && coin(0.2)) {
        for (const auto& [name, vt] : ctx.entries()) {
          if (vt->kind() == TyKind::Nat) c = Term::var(name);
        }
      }
      return Term::step(c, comp_rec(ty, ctx, d));
    });
    options.emplace_back(2, [&] {
      TyPtr b = base_type();
      TermPtr e = comp_rec(Ty::ret(b), ctx, d);
      Binder x{fresh(), b};
      return Term::bind(e, x, comp_rec(ty, ctx.extended(x.name, b), d));
    });
    options.emplace_back(1, [&] {
      TermPtr c = value_rec(Ty::boolean(), ctx, 1);
      TermPtr t = comp_rec(ty, ctx, d);
      return Term::if_(c, t, comp_rec(ty, ctx, d));
    });
    options.emplace_back(1, [&] {
      TermPtr n = value_rec(Ty::nat(), ctx, 1);
      TermPtr z = comp_rec(ty, ctx, d);
      Binder k{fresh(), Ty::nat()};
      Binder ih{fresh(), Ty::thunk(ty)};
      TermPtr s = comp_rec(ty, ctx.extended(k.name, k.type).extended(ih.name, ih.type), d);
      return Term::natrec(n, z, k, ih, s);
    });
    switch (theory_.kind) {
      case EffectKind::Pure:
        break;
      case EffectKind::NonDet:
        options.emplace_back(3, [&] {
          TermPtr l = comp_rec(ty, ctx, d);
          return Term::branch(l, comp_rec(ty, ctx, d));
        });
        options.emplace_back(1, [&] { return Term::fail(); });
        break;
      case EffectKind::Prob:
        options.emplace_back(4, [&] {
          Rational p = probability();
          TermPtr l = comp_rec(ty, ctx, d);
          return Term::flip(p, l, comp_rec(ty, ctx, d));
        });
        break;
      case EffectKind::State:
        options.emplace_back(2, [&] {
          Binder s{fresh(), theory_.state};
          return Term::get(s, comp_rec(ty, ctx.extended(s.name, s.type), d));
        });
        options.emplace_back(2, [&] {
          TermPtr v = value_rec(theory_.state, ctx, 1);
          return Term::set(v, comp_rec(ty, ctx, d));
        });
        break;
    }
  }

  int total = 0;
  for (const auto& o : options) total += o.first;
  int r = static_cast<int>(pick(static_cast<std::size_t>(total)));
  for (const auto& o : options) {
    if (r < o.first) return o.second();
    r -= o.first;
  }
  return options.front().second();
}

TermPtr TermGenerator::value_rec(const TyPtr& ty, const Ctx& ctx, int depth) {
  std::vector<std::string> vars;
  for (const auto& [name, vt] : ctx.entries()) {
    if (ty_equal(*vt, *ty)) vars.push_back(name);
  }
  if (!vars.empty() && coin(0.5)) return Term::var(vars[pick(vars.size())]);

  switch (ty->kind()) {
    case TyKind::Unit:
      return Term::triv();
    case TyKind::Bool:
      return Term::boolean(coin(0.5));
    case TyKind::Nat:
      if (depth > 0 && !vars.empty() && coin(0.3)) {
        return Term::suc(value_rec(ty, ctx, depth - 1));
      }
      return Term::numeral(
          std::uniform_int_distribution<std::uint64_t>(0, opts_.max_numeral)(rng_));
    case TyKind::List: {
      TermPtr out = Term::nil();
      std::size_t n = pick(3);
      for (std::size_t i = 0; i < n; ++i) out = Term::cons(value_rec(ty->elem(), ctx, 0), out);
      return out;
    }
    case TyKind::Prod: {
      TermPtr l = value_rec(ty->left(), ctx, depth - 1);
      return Term::pair(l, value_rec(ty->right(), ctx, depth - 1));
    }
    case TyKind::Sum:
      if (coin(0.5)) return Term::inl(value_rec(ty->left(), ctx, depth - 1));
      return Term::inr(value_rec(ty->right(), ctx, depth - 1));
    case TyKind::U:
      return comp_rec(ty->inner(), ctx, std::max(depth - 1, 0));
    case TyKind::F:
    case TyKind::Arrow:
      break;
  }
  throw std::invalid_argument("value of a computation type requested");
}

}  // namespace cbpv
