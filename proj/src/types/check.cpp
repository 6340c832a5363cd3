#include "cbpv/types/check.hpp"

#include <fmt/format.h>

#include "cbpv/lang/printer.hpp"

namespace cbpv {

Ctx::Ctx(std::initializer_list<std::pair<std::string, TyPtr>> entries) {
  for (const auto& [name, ty] : entries) *this = extended(name, ty);
}

Ctx Ctx::extended(std::string name, TyPtr type) const {
  if (!type || !type->is_value()) {
    throw std::invalid_argument("context entries must have value types: " + name);
  }
  Ctx out;
  out.entries_.reserve(entries_.size() + 1);
  for (const auto& e : entries_) {
    if (e.first != name) out.entries_.push_back(e);
  }
  out.entries_.emplace_back(std::move(name), std::move(type));
  return out;
}

const TyPtr* Ctx::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

TypeError::TypeError(SourceLoc loc, std::string message, std::string expected,
                     std::string found)
    : std::runtime_error([&] {
        std::string s = fmt::format("{}:{}: type error: {}", loc.line, loc.column,
                                    message);
        if (!expected.empty() || !found.empty()) {
          s += fmt::format(" (expected {}, found {})", expected.empty() ? "?" : expected,
                           found.empty() ? "?" : found);
        }
        return s;
      }()),
      loc_(loc),
      message_(std::move(message)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

std::string show(const TyPtr& t) { return t ? print_type(*t) : "?"; }

std::string_view form_name(TermKind k) {
  switch (k) {
    case TermKind::Var: return "variable";
    case TermKind::Triv: return "tt";
    case TermKind::True: return "true";
    case TermKind::False: return "false";
    case TermKind::Zero: return "zero";
    case TermKind::Suc: return "suc";
    case TermKind::Nil: return "nil";
    case TermKind::Cons: return "cons";
    case TermKind::Pair: return "pair";
    case TermKind::Inl: return "inl";
    case TermKind::Inr: return "inr";
    case TermKind::CostLit: return "cost literal";
    case TermKind::Ret: return "ret";
    case TermKind::Bind: return "bind";
    case TermKind::Lam: return "lam";
    case TermKind::Ap: return "application";
    case TermKind::Step: return "step";
    case TermKind::NatRec: return "natrec";
    case TermKind::ListRec: return "listrec";
    case TermKind::Case: return "case";
    case TermKind::Split: return "split";
    case TermKind::If: return "if";
    case TermKind::Branch: return "branch";
    case TermKind::Fail: return "fail";
    case TermKind::Flip: return "flip";
    case TermKind::Get: return "get";
    case TermKind::Set: return "set";
    case TermKind::Par: return "par";
  }
  return "?";
}

class Checker {
 public:
  explicit Checker(const CheckOptions& opts) : opts_(opts) {}

  TermPtr check(const Ctx& ctx, const TermPtr& t, const TyPtr& ty) {
    if (t->kind() == TermKind::Var) {
      TyPtr found = lookup(ctx, *t);
      if (ty->is_value()) {
        if (!ty_equal(*found, *ty)) mismatch(*t, ty, found);
      } else if (found->kind() != TyKind::U || !ty_equal(*found->inner(), *ty)) {
        // A variable in computation position must hold a thunk of exactly
        // that computation type.
        mismatch(*t, Ty::thunk(ty), found);
      }
      return t;
    }
    if (t->is_value_form()) {
      if (ty->is_computation()) {
        throw TypeError(t->loc(),
                        fmt::format("value term '{}' where a computation is required",
                                    form_name(t->kind())),
                        show(ty), "a value");
      }
      return check_value(ctx, t, ty);
    }
    // Computation forms.
    if (ty->is_value()) {
      if (ty->kind() == TyKind::U) return check_comp(ctx, t, ty->inner());
      throw TypeError(t->loc(),
                      fmt::format("computation '{}' where a value is required",
                                  form_name(t->kind())),
                      show(ty), "a computation");
    }
    return check_comp(ctx, t, ty);
  }

  std::pair<TermPtr, TyPtr> infer(const Ctx& ctx, const TermPtr& t) {
    const Term& n = *t;
    switch (n.kind()) {
      case TermKind::Var:
        return {t, lookup(ctx, n)};
      case TermKind::Triv:
        return {t, Ty::unit()};
      case TermKind::True:
      case TermKind::False:
        return {t, Ty::boolean()};
      case TermKind::Zero:
        return {t, Ty::nat()};
      case TermKind::Suc:
        return {t->with({check(ctx, n.kid(0), Ty::nat())}, {}), Ty::nat()};
      case TermKind::Cons: {
        // Prefer the tail, which carries the list's cost annotation.
        try {
          auto [tail, tt] = infer(ctx, n.kid(1));
          if (tt->kind() != TyKind::List) mismatch(*n.kid(1), nullptr, tt, "a list");
          auto head = check(ctx, n.kid(0), tt->elem());
          return {t->with({head, tail}, {}), tt};
        } catch (const TypeError&) {
          auto [head, ht] = infer_value(ctx, n.kid(0));
          TyPtr lt = Ty::list(ht);
          auto tail = check(ctx, n.kid(1), lt);
          return {t->with({head, tail}, {}), lt};
        }
      }
      case TermKind::Pair: {
        auto [a, at] = infer_value(ctx, n.kid(0));
        auto [b, bt] = infer_value(ctx, n.kid(1));
        return {t->with({a, b}, {}), Ty::prod(at, bt)};
      }
      case TermKind::Nil:
      case TermKind::Inl:
      case TermKind::Inr:
        throw TypeError(n.loc(), fmt::format("cannot infer the type of '{}'; it needs "
                                             "a type annotation from context",
                                             form_name(n.kind())));
      case TermKind::CostLit:
        throw TypeError(n.loc(), "cost literal is only allowed as a step cost");
      case TermKind::Ret: {
        auto [v, vt] = infer_value(ctx, n.kid(0));
        return {t->with({v}, {}), Ty::ret(vt)};
      }
      case TermKind::Bind: {
        auto [e, x] = bind_head(ctx, n);
        auto [body, bt] = infer_comp(ctx.extended(x.name, x.type), n.kid(1));
        return {t->with({e, body}, {x}), bt};
      }
      case TermKind::Lam: {
        const Binder& x = n.binder(0);
        if (!x.type) {
          throw TypeError(n.loc(), "cannot infer the type of an unannotated lambda");
        }
        require_value_binder(n, x);
        auto [body, bt] = infer_comp(ctx.extended(x.name, x.type), n.kid(0));
        return {t->with({body}, {x}), Ty::arrow(x.type, bt)};
      }
      case TermKind::Ap: {
        auto [fn, ft] = infer_comp(ctx, n.kid(0));
        if (ft->kind() != TyKind::Arrow) mismatch(*n.kid(0), nullptr, ft, "a function");
        auto arg = check(ctx, n.kid(1), ft->from());
        return {t->with({fn, arg}, {}), ft->to()};
      }
      case TermKind::Step: {
        auto c = check_cost(ctx, n.kid(0));
        auto [body, bt] = infer_comp(ctx, n.kid(1));
        return {t->with({c, body}, {}), bt};
      }
      case TermKind::NatRec: {
        auto num = check(ctx, n.kid(0), Ty::nat());
        auto [z, motive] = infer_comp(ctx, n.kid(1));
        auto [k, ih] = natrec_binders(n, motive);
        auto s = check(ctx.extended(k.name, k.type).extended(ih.name, ih.type),
                       n.kid(2), motive);
        return {t->with({num, z, s}, {k, ih}), motive};
      }
      case TermKind::ListRec: {
        auto [l, lt] = list_scrutinee(ctx, n);
        auto [nl, motive] = infer_comp(ctx, n.kid(1));
        return {listrec_rest(ctx, n, l, lt, nl, motive), motive};
      }
      case TermKind::Case: {
        auto [s, st] = sum_scrutinee(ctx, n);
        Binder x = annotate(n, n.binder(0), st->left());
        Binder y = annotate(n, n.binder(1), st->right());
        auto [left, motive] = infer_comp(ctx.extended(x.name, x.type), n.kid(1));
        auto right = check(ctx.extended(y.name, y.type), n.kid(2), motive);
        return {t->with({s, left, right}, {x, y}), motive};
      }
      case TermKind::Split: {
        auto [v, x, y] = split_head(ctx, n);
        auto [body, bt] =
            infer_comp(ctx.extended(x.name, x.type).extended(y.name, y.type), n.kid(1));
        return {t->with({v, body}, {x, y}), bt};
      }
      case TermKind::If: {
        auto b = check(ctx, n.kid(0), Ty::boolean());
        try {
          auto [th, tt] = infer_comp(ctx, n.kid(1));
          auto el = check(ctx, n.kid(2), tt);
          return {t->with({b, th, el}, {}), tt};
        } catch (const TypeError&) {
          auto [el, et] = infer_comp(ctx, n.kid(2));
          auto th = check(ctx, n.kid(1), et);
          return {t->with({b, th, el}, {}), et};
        }
      }
      case TermKind::Par: {
        require_par(n);
        auto [a, at] = infer_comp(ctx, n.kid(0));
        auto [b, bt] = infer_comp(ctx, n.kid(1));
        if (at->kind() != TyKind::F) mismatch(*n.kid(0), nullptr, at, "F A");
        if (bt->kind() != TyKind::F) mismatch(*n.kid(1), nullptr, bt, "F B");
        return {t->with({a, b}, {}), Ty::ret(Ty::prod(at->inner(), bt->inner()))};
      }
      case TermKind::Branch:
      case TermKind::Fail:
      case TermKind::Flip:
      case TermKind::Get:
      case TermKind::Set:
        require_theory(n);
        throw TypeError(n.loc(),
                        fmt::format("cannot infer the type of '{}'; effect operations "
                                    "are checked against an ascribed type",
                                    form_name(n.kind())));
    }
    throw TypeError(n.loc(), "unknown term form");
  }

 private:
  TyPtr lookup(const Ctx& ctx, const Term& v) {
    const TyPtr* ty = ctx.lookup(v.name());
    if (!ty) throw TypeError(v.loc(), fmt::format("unbound variable '{}'", v.name()));
    return *ty;
  }

  [[noreturn]] void mismatch(const Term& at, const TyPtr& expected, const TyPtr& found,
                             std::string expected_text = {}) {
    throw TypeError(at.loc(), "type mismatch",
                    expected ? show(expected) : std::move(expected_text), show(found));
  }

  // Value-position inference: a computation form denotes its thunk.
  std::pair<TermPtr, TyPtr> infer_value(const Ctx& ctx, const TermPtr& t) {
    auto [e, ty] = infer(ctx, t);
    if (ty->is_computation()) return {e, Ty::thunk(ty)};
    return {e, ty};
  }

  // Computation-position inference: a variable of type U X is forced.
  std::pair<TermPtr, TyPtr> infer_comp(const Ctx& ctx, const TermPtr& t) {
    if (t->kind() == TermKind::Var) {
      TyPtr ty = lookup(ctx, *t);
      if (ty->kind() != TyKind::U) {
        throw TypeError(t->loc(),
                        fmt::format("variable '{}' of value type used as a computation",
                                    t->name()),
                        "U X", show(ty));
      }
      return {t, ty->inner()};
    }
    if (t->is_value_form()) {
      throw TypeError(t->loc(),
                      fmt::format("value term '{}' where a computation is required",
                                  form_name(t->kind())));
    }
    return infer(ctx, t);
  }

  void require_value_binder(const Term& at, const Binder& b) {
    if (b.type && !b.type->is_value()) {
      throw TypeError(at.loc(),
                      fmt::format("binder '{}' must have a value type", b.name), "a value type",
                      show(b.type));
    }
  }

  // Fills an unannotated binder, or checks an annotated one.
  Binder annotate(const Term& at, const Binder& b, const TyPtr& ty) {
    if (b.type && !ty_equal(*b.type, *ty)) {
      throw TypeError(at.loc(), fmt::format("binder '{}' annotated with the wrong type", b.name),
                      show(ty), show(b.type));
    }
    return {b.name, ty};
  }

  TermPtr check_value(const Ctx& ctx, const TermPtr& t, const TyPtr& ty) {
    const Term& n = *t;
    auto expect = [&](TyKind k) {
      if (ty->kind() != k) {
        throw TypeError(n.loc(),
                        fmt::format("'{}' does not have type {}", form_name(n.kind()),
                                    show(ty)),
                        show(ty), std::string(form_name(n.kind())));
      }
    };
    switch (n.kind()) {
      case TermKind::Triv:
        expect(TyKind::Unit);
        return t;
      case TermKind::True:
      case TermKind::False:
        expect(TyKind::Bool);
        return t;
      case TermKind::Zero:
        expect(TyKind::Nat);
        return t;
      case TermKind::Suc:
        expect(TyKind::Nat);
        return t->with({check(ctx, n.kid(0), Ty::nat())}, {});
      case TermKind::Nil:
        expect(TyKind::List);
        return t;
      case TermKind::Cons:
        expect(TyKind::List);
        return t->with({check(ctx, n.kid(0), ty->elem()), check(ctx, n.kid(1), ty)}, {});
      case TermKind::Pair:
        expect(TyKind::Prod);
        return t->with({check(ctx, n.kid(0), ty->left()), check(ctx, n.kid(1), ty->right())},
                       {});
      case TermKind::Inl:
        expect(TyKind::Sum);
        return t->with({check(ctx, n.kid(0), ty->left())}, {});
      case TermKind::Inr:
        expect(TyKind::Sum);
        return t->with({check(ctx, n.kid(0), ty->right())}, {});
      case TermKind::CostLit:
        throw TypeError(n.loc(), "cost literal is only allowed as a step cost");
      default:
        break;
    }
    throw TypeError(n.loc(), "unexpected value form");
  }

  TermPtr check_comp(const Ctx& ctx, const TermPtr& t, const TyPtr& ty) {
    const Term& n = *t;
    switch (n.kind()) {
      case TermKind::Var:
        return check(ctx, t, ty);
      case TermKind::Ret:
        if (ty->kind() != TyKind::F) mismatch(n, ty, nullptr, "F A");
        return t->with({check(ctx, n.kid(0), ty->inner())}, {});
      case TermKind::Bind: {
        auto [e, x] = bind_head(ctx, n);
        auto body = check(ctx.extended(x.name, x.type), n.kid(1), ty);
        return t->with({e, body}, {x});
      }
      case TermKind::Lam: {
        if (ty->kind() != TyKind::Arrow) {
          throw TypeError(n.loc(), "lambda checked against a non-function type", show(ty),
                          "a function");
        }
        require_value_binder(n, n.binder(0));
        Binder x = annotate(n, n.binder(0), ty->from());
        auto body = check(ctx.extended(x.name, x.type), n.kid(0), ty->to());
        return t->with({body}, {x});
      }
      case TermKind::Step: {
        auto c = check_cost(ctx, n.kid(0));
        return t->with({c, check(ctx, n.kid(1), ty)}, {});
      }
      case TermKind::NatRec: {
        auto num = check(ctx, n.kid(0), Ty::nat());
        auto z = check(ctx, n.kid(1), ty);
        auto [k, ih] = natrec_binders(n, ty);
        auto s = check(ctx.extended(k.name, k.type).extended(ih.name, ih.type), n.kid(2), ty);
        return t->with({num, z, s}, {k, ih});
      }
      case TermKind::ListRec: {
        auto [l, lt] = list_scrutinee(ctx, n);
        auto nl = check(ctx, n.kid(1), ty);
        return listrec_rest(ctx, n, l, lt, nl, ty);
      }
      case TermKind::Case: {
        auto [s, st] = sum_scrutinee(ctx, n);
        Binder x = annotate(n, n.binder(0), st->left());
        Binder y = annotate(n, n.binder(1), st->right());
        auto left = check(ctx.extended(x.name, x.type), n.kid(1), ty);
        auto right = check(ctx.extended(y.name, y.type), n.kid(2), ty);
        return t->with({s, left, right}, {x, y});
      }
      case TermKind::Split: {
        auto [v, x, y] = split_head(ctx, n);
        auto body = check(ctx.extended(x.name, x.type).extended(y.name, y.type), n.kid(1), ty);
        return t->with({v, body}, {x, y});
      }
      case TermKind::If:
        return t->with({check(ctx, n.kid(0), Ty::boolean()), check(ctx, n.kid(1), ty),
                        check(ctx, n.kid(2), ty)},
                       {});
      case TermKind::Branch:
        require_theory(n);
        return t->with({check(ctx, n.kid(0), ty), check(ctx, n.kid(1), ty)}, {});
      case TermKind::Fail:
        require_theory(n);
        return t;
      case TermKind::Flip:
        require_theory(n);
        return t->with({check(ctx, n.kid(0), ty), check(ctx, n.kid(1), ty)}, {});
      case TermKind::Get: {
        require_theory(n);
        Binder s = annotate(n, n.binder(0), opts_.theory.state);
        return t->with({check(ctx.extended(s.name, s.type), n.kid(0), ty)}, {s});
      }
      case TermKind::Set:
        require_theory(n);
        return t->with({check(ctx, n.kid(0), opts_.theory.state), check(ctx, n.kid(1), ty)},
                       {});
      case TermKind::Par: {
        require_par(n);
        if (ty->kind() != TyKind::F || ty->inner()->kind() != TyKind::Prod) {
          mismatch(n, ty, nullptr, "F (* A B)");
        }
        auto a = check(ctx, n.kid(0), Ty::ret(ty->inner()->left()));
        auto b = check(ctx, n.kid(1), Ty::ret(ty->inner()->right()));
        return t->with({a, b}, {});
      }
      case TermKind::Ap: {
        auto [e, found] = infer(ctx, t);
        if (!ty_equal(*found, *ty)) mismatch(n, ty, found);
        return e;
      }
      default:
        break;
    }
    throw TypeError(n.loc(), "unexpected computation form");
  }

  TermPtr check_cost(const Ctx& ctx, const TermPtr& c) {
    if (c->kind() == TermKind::CostLit) {
      if (!admissible(opts_.monoid, c->cost())) {
        throw TypeError(c->loc(), "work/span cost literal under the sequential monoid");
      }
      return c;
    }
    return check(ctx, c, Ty::nat());
  }

  std::pair<TermPtr, Binder> bind_head(const Ctx& ctx, const Term& n) {
    const Binder& x = n.binder(0);
    require_value_binder(n, x);
    if (x.type) return {check(ctx, n.kid(0), Ty::ret(x.type)), x};
    auto [e, et] = infer_comp(ctx, n.kid(0));
    if (et->kind() != TyKind::F) {
      throw TypeError(n.kid(0)->loc(), "bound computation must have type F A", "F A",
                      show(et));
    }
    return {e, Binder{x.name, et->inner()}};
  }

  std::pair<Binder, Binder> natrec_binders(const Term& n, const TyPtr& motive) {
    return {annotate(n, n.binder(0), Ty::nat()),
            annotate(n, n.binder(1), Ty::thunk(motive))};
  }

  std::pair<TermPtr, TyPtr> list_scrutinee(const Ctx& ctx, const Term& n) {
    auto [l, lt] = infer(ctx, n.kid(0));
    if (lt->kind() != TyKind::List) {
      throw TypeError(n.kid(0)->loc(), "listrec scrutinee is not a list", "(list A)",
                      show(lt));
    }
    return {l, lt};
  }

  TermPtr listrec_rest(const Ctx& ctx, const Term& n, const TermPtr& l, const TyPtr& lt,
                       const TermPtr& nl, const TyPtr& motive) {
    Binder x = annotate(n, n.binder(0), lt->elem());
    Binder xs = annotate(n, n.binder(1), lt);
    Binder ih = annotate(n, n.binder(2), Ty::thunk(motive));
    Ctx inner = ctx.extended(x.name, x.type).extended(xs.name, xs.type).extended(ih.name, ih.type);
    auto cs = check(inner, n.kid(2), motive);
    auto out = n.with({l, nl, cs}, {x, xs, ih});
    return out->with_charge(lt->annotation());
  }

  std::pair<TermPtr, TyPtr> sum_scrutinee(const Ctx& ctx, const Term& n) {
    auto [s, st] = infer(ctx, n.kid(0));
    if (st->kind() != TyKind::Sum) {
      throw TypeError(n.kid(0)->loc(), "case scrutinee is not a sum", "(+ A B)", show(st));
    }
    return {s, st};
  }

  std::tuple<TermPtr, Binder, Binder> split_head(const Ctx& ctx, const Term& n) {
    auto [v, vt] = infer(ctx, n.kid(0));
    if (vt->kind() != TyKind::Prod) {
      throw TypeError(n.kid(0)->loc(), "split scrutinee is not a pair", "(* A B)", show(vt));
    }
    return {v, annotate(n, n.binder(0), vt->left()), annotate(n, n.binder(1), vt->right())};
  }

  void require_theory(const Term& n) {
    EffectKind need = EffectKind::Pure;
    switch (n.kind()) {
      case TermKind::Branch:
      case TermKind::Fail: need = EffectKind::NonDet; break;
      case TermKind::Flip: need = EffectKind::Prob; break;
      case TermKind::Get:
      case TermKind::Set: need = EffectKind::State; break;
      default: return;
    }
    if (opts_.theory.kind != need) {
      throw TypeError(n.loc(),
                      fmt::format("effect operation '{}' is outside the declared theory '{}'",
                                  form_name(n.kind()), print_theory(opts_.theory)));
    }
  }

  void require_par(const Term& n) {
    if (opts_.theory.kind != EffectKind::Pure) {
      throw TypeError(n.loc(), "'par' is only available in the pure theory");
    }
    if (opts_.monoid != CostMonoid::ParWorkSpan) {
      throw TypeError(n.loc(), "'par' requires the parallel cost monoid");
    }
  }

  const CheckOptions& opts_;
};

}  // namespace

TermPtr elaborate_check(const Ctx& ctx, const TermPtr& t, const TyPtr& ty,
                        const CheckOptions& opts) {
  Checker c(opts);
  return c.check(ctx, t, ty);
}

std::pair<TermPtr, TyPtr> elaborate_infer(const Ctx& ctx, const TermPtr& t,
                                          const CheckOptions& opts) {
  Checker c(opts);
  return c.infer(ctx, t);
}

void check(const Ctx& ctx, const TermPtr& t, const TyPtr& ty, const CheckOptions& opts) {
  elaborate_check(ctx, t, ty, opts);
}

TyPtr infer(const Ctx& ctx, const TermPtr& t, const CheckOptions& opts) {
  return elaborate_infer(ctx, t, opts).second;
}

Program elaborate(const Program& p) {
  CheckOptions opts{p.theory, p.monoid};
  Program out = p;
  out.body = elaborate_check(Ctx{}, p.body, p.declared_ty, opts);
  return out;
}

}  // namespace cbpv
