#include "cbpv/lang/syntax.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cbpv {

// ---------------------------------------------------------------------------
// Ty

namespace {

TyPtr make_ty(TyKind kind, TyPtr a = nullptr, TyPtr b = nullptr,
              Cost annotation = Cost::zero()) {
  return std::make_shared<const Ty>(kind, std::move(a), std::move(b), annotation);
}

void require_value(const TyPtr& t, const char* where) {
  if (!t || !t->is_value()) {
    throw std::invalid_argument(std::string(where) + " expects a value type");
  }
}

void require_computation(const TyPtr& t, const char* where) {
  if (!t || !t->is_computation()) {
    throw std::invalid_argument(std::string(where) + " expects a computation type");
  }
}

}  // namespace

TyPtr Ty::unit() {
  static const TyPtr t = make_ty(TyKind::Unit);
  return t;
}

TyPtr Ty::boolean() {
  static const TyPtr t = make_ty(TyKind::Bool);
  return t;
}

TyPtr Ty::nat() {
  static const TyPtr t = make_ty(TyKind::Nat);
  return t;
}

TyPtr Ty::prod(TyPtr a, TyPtr b) {
  require_value(a, "*");
  require_value(b, "*");
  return make_ty(TyKind::Prod, std::move(a), std::move(b));
}

TyPtr Ty::sum(TyPtr a, TyPtr b) {
  require_value(a, "+");
  require_value(b, "+");
  return make_ty(TyKind::Sum, std::move(a), std::move(b));
}

TyPtr Ty::list(TyPtr elem, Cost annotation) {
  require_value(elem, "list");
  return make_ty(TyKind::List, std::move(elem), nullptr, annotation);
}

TyPtr Ty::thunk(TyPtr comp) {
  require_computation(comp, "U");
  return make_ty(TyKind::U, std::move(comp));
}

TyPtr Ty::ret(TyPtr value) {
  require_value(value, "F");
  return make_ty(TyKind::F, std::move(value));
}

TyPtr Ty::arrow(TyPtr from, TyPtr to) {
  require_value(from, "->");
  require_computation(to, "->");
  return make_ty(TyKind::Arrow, std::move(from), std::move(to));
}

bool Ty::first_order() const {
  switch (kind_) {
    case TyKind::Unit:
    case TyKind::Bool:
    case TyKind::Nat:
      return true;
    case TyKind::Prod:
    case TyKind::Sum:
      return a_->first_order() && b_->first_order();
    case TyKind::List:
    case TyKind::F:
      return a_->first_order();
    case TyKind::U:
      return false;
    case TyKind::Arrow:
      return a_->first_order() && b_->first_order();
  }
  return false;
}

bool ty_equal(const Ty& a, const Ty& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TyKind::Unit:
    case TyKind::Bool:
    case TyKind::Nat:
      return true;
    case TyKind::Prod:
    case TyKind::Sum:
    case TyKind::Arrow:
      return ty_equal(*a.left(), *b.left()) && ty_equal(*a.right(), *b.right());
    case TyKind::List:
      return a.annotation() == b.annotation() && ty_equal(*a.elem(), *b.elem());
    case TyKind::U:
    case TyKind::F:
      return ty_equal(*a.inner(), *b.inner());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Term

namespace {

std::shared_ptr<Term> node(TermKind k, SourceLoc loc) {
  return std::make_shared<Term>(k, loc);
}

}  // namespace

// The factories below write the private fields through a mutable node
// before handing out a pointer to const.
#define CBPV_NODE(kind) auto n = node(TermKind::kind, loc)

TermPtr Term::var(std::string name, SourceLoc loc) {
  CBPV_NODE(Var);
  n->name_ = std::move(name);
  return n;
}

TermPtr Term::triv(SourceLoc loc) { CBPV_NODE(Triv); return n; }

TermPtr Term::boolean(bool b, SourceLoc loc) {
  return node(b ? TermKind::True : TermKind::False, loc);
}

TermPtr Term::zero(SourceLoc loc) { CBPV_NODE(Zero); return n; }

TermPtr Term::suc(TermPtr v, SourceLoc loc) {
  CBPV_NODE(Suc);
  n->kids_ = {std::move(v)};
  return n;
}

TermPtr Term::numeral(std::uint64_t k, SourceLoc loc) {
  TermPtr t = zero(loc);
  for (std::uint64_t i = 0; i < k; ++i) t = suc(std::move(t), loc);
  return t;
}

TermPtr Term::nil(SourceLoc loc) { CBPV_NODE(Nil); return n; }

TermPtr Term::cons(TermPtr head, TermPtr tail, SourceLoc loc) {
  CBPV_NODE(Cons);
  n->kids_ = {std::move(head), std::move(tail)};
  return n;
}

TermPtr Term::pair(TermPtr a, TermPtr b, SourceLoc loc) {
  CBPV_NODE(Pair);
  n->kids_ = {std::move(a), std::move(b)};
  return n;
}

TermPtr Term::inl(TermPtr v, SourceLoc loc) {
  CBPV_NODE(Inl);
  n->kids_ = {std::move(v)};
  return n;
}

TermPtr Term::inr(TermPtr v, SourceLoc loc) {
  CBPV_NODE(Inr);
  n->kids_ = {std::move(v)};
  return n;
}

TermPtr Term::cost_lit(Cost c, SourceLoc loc) {
  CBPV_NODE(CostLit);
  n->cost_ = c;
  return n;
}

TermPtr Term::ret(TermPtr v, SourceLoc loc) {
  CBPV_NODE(Ret);
  n->kids_ = {std::move(v)};
  return n;
}

TermPtr Term::bind(TermPtr e, Binder x, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Bind);
  n->kids_ = {std::move(e), std::move(body)};
  n->binders_ = {std::move(x)};
  return n;
}

TermPtr Term::lam(Binder x, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Lam);
  n->kids_ = {std::move(body)};
  n->binders_ = {std::move(x)};
  return n;
}

TermPtr Term::ap(TermPtr fn, TermPtr arg, SourceLoc loc) {
  CBPV_NODE(Ap);
  n->kids_ = {std::move(fn), std::move(arg)};
  return n;
}

TermPtr Term::step(TermPtr cost, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Step);
  n->kids_ = {std::move(cost), std::move(body)};
  return n;
}

TermPtr Term::step(Cost c, TermPtr body, SourceLoc loc) {
  return step(cost_lit(c, loc), std::move(body), loc);
}

TermPtr Term::natrec(TermPtr num, TermPtr z, Binder k, Binder ih, TermPtr succ,
                     SourceLoc loc) {
  CBPV_NODE(NatRec);
  n->kids_ = {std::move(num), std::move(z), std::move(succ)};
  n->binders_ = {std::move(k), std::move(ih)};
  return n;
}

TermPtr Term::listrec(TermPtr l, TermPtr nl, Binder x, Binder xs, Binder ih,
                      TermPtr cs, SourceLoc loc, Cost charge) {
  CBPV_NODE(ListRec);
  n->kids_ = {std::move(l), std::move(nl), std::move(cs)};
  n->binders_ = {std::move(x), std::move(xs), std::move(ih)};
  n->cost_ = charge;
  return n;
}

TermPtr Term::sum_case(TermPtr s, Binder x, TermPtr left, Binder y,
                       TermPtr right, SourceLoc loc) {
  CBPV_NODE(Case);
  n->kids_ = {std::move(s), std::move(left), std::move(right)};
  n->binders_ = {std::move(x), std::move(y)};
  return n;
}

TermPtr Term::split(TermPtr v, Binder x, Binder y, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Split);
  n->kids_ = {std::move(v), std::move(body)};
  n->binders_ = {std::move(x), std::move(y)};
  return n;
}

TermPtr Term::if_(TermPtr b, TermPtr t, TermPtr f, SourceLoc loc) {
  CBPV_NODE(If);
  n->kids_ = {std::move(b), std::move(t), std::move(f)};
  return n;
}

TermPtr Term::branch(TermPtr e0, TermPtr e1, SourceLoc loc) {
  CBPV_NODE(Branch);
  n->kids_ = {std::move(e0), std::move(e1)};
  return n;
}

TermPtr Term::fail(SourceLoc loc) { CBPV_NODE(Fail); return n; }

TermPtr Term::flip(Rational p, TermPtr e0, TermPtr e1, SourceLoc loc) {
  if (p < 0 || p > 1) {
    throw std::invalid_argument("flip probability outside [0,1]: " + p.str());
  }
  CBPV_NODE(Flip);
  n->prob_ = std::move(p);
  n->kids_ = {std::move(e0), std::move(e1)};
  return n;
}

TermPtr Term::get(Binder s, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Get);
  n->kids_ = {std::move(body)};
  n->binders_ = {std::move(s)};
  return n;
}

TermPtr Term::set(TermPtr v, TermPtr body, SourceLoc loc) {
  CBPV_NODE(Set);
  n->kids_ = {std::move(v), std::move(body)};
  return n;
}

TermPtr Term::par(TermPtr e0, TermPtr e1, SourceLoc loc) {
  CBPV_NODE(Par);
  n->kids_ = {std::move(e0), std::move(e1)};
  return n;
}

#undef CBPV_NODE

TermPtr Term::with(std::vector<TermPtr> kids, std::vector<Binder> binders) const {
  auto n = std::make_shared<Term>(*this);
  n->kids_ = std::move(kids);
  n->binders_ = std::move(binders);
  return n;
}

TermPtr Term::with_charge(Cost charge) const {
  auto n = std::make_shared<Term>(*this);
  n->cost_ = charge;
  return n;
}

// ---------------------------------------------------------------------------
// Structural utilities

namespace {

// Whether child `kid` sits under the node's binders.
bool binds_in(TermKind k, std::size_t kid) {
  switch (k) {
    case TermKind::Bind:
    case TermKind::Split:
      return kid == 1;
    case TermKind::Lam:
    case TermKind::Get:
      return kid == 0;
    case TermKind::NatRec:
    case TermKind::ListRec:
      return kid == 2;
    case TermKind::Case:
      return kid == 1 || kid == 2;
    default:
      return false;
  }
}

/// Binders in scope for child `kid`. Case scopes x over the left arm and y
/// over the right arm only.
std::vector<const Binder*> scope_for(const Term& t, std::size_t kid) {
  std::vector<const Binder*> out;
  if (!binds_in(t.kind(), kid)) return out;
  if (t.kind() == TermKind::Case) {
    out.push_back(&t.binder(kid - 1));
    return out;
  }
  for (const auto& b : t.binders()) out.push_back(&b);
  return out;
}

using Scope = std::vector<std::string>;

// De Bruijn index of a name (innermost = 0), or -1 when free.
long index_of(const Scope& s, const std::string& name) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] == name) return static_cast<long>(s.size() - 1 - i);
  }
  return -1;
}

bool alpha_rec(const Term& a, const Term& b, Scope& sa, Scope& sb,
               bool ignore_annotations) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == TermKind::Var) {
    long ia = index_of(sa, a.name());
    long ib = index_of(sb, b.name());
    if (ia != ib) return false;
    return ia >= 0 || a.name() == b.name();
  }
  if (a.kind() == TermKind::CostLit && a.cost() != b.cost()) return false;
  if (a.kind() == TermKind::Flip && a.prob() != b.prob()) return false;
  if (a.kids().size() != b.kids().size()) return false;
  if (a.binders().size() != b.binders().size()) return false;
  if (!ignore_annotations) {
    for (std::size_t i = 0; i < a.binders().size(); ++i) {
      const auto& ta = a.binder(i).type;
      const auto& tb = b.binder(i).type;
      if (static_cast<bool>(ta) != static_cast<bool>(tb)) return false;
      if (ta && !ty_equal(*ta, *tb)) return false;
    }
  }
  for (std::size_t i = 0; i < a.kids().size(); ++i) {
    auto scope_a = scope_for(a, i);
    auto scope_b = scope_for(b, i);
    for (auto* x : scope_a) sa.push_back(x->name);
    for (auto* x : scope_b) sb.push_back(x->name);
    bool ok = alpha_rec(*a.kid(i), *b.kid(i), sa, sb, ignore_annotations);
    sa.resize(sa.size() - scope_a.size());
    sb.resize(sb.size() - scope_b.size());
    if (!ok) return false;
  }
  return true;
}

void free_rec(const Term& t, Scope& scope, std::vector<std::string>& out) {
  if (t.kind() == TermKind::Var) {
    if (index_of(scope, t.name()) < 0 &&
        std::find(out.begin(), out.end(), t.name()) == out.end()) {
      out.push_back(t.name());
    }
    return;
  }
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    auto s = scope_for(t, i);
    for (auto* x : s) scope.push_back(x->name);
    free_rec(*t.kid(i), scope, out);
    scope.resize(scope.size() - s.size());
  }
}

}  // namespace

bool alpha_equivalent(const Term& a, const Term& b, bool ignore_annotations) {
  Scope sa, sb;
  return alpha_rec(a, b, sa, sb, ignore_annotations);
}

std::vector<std::string> free_vars(const Term& t) {
  Scope scope;
  std::vector<std::string> out;
  free_rec(t, scope, out);
  return out;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& k : t.kids()) n += term_size(*k);
  return n;
}

bool theory_equal(const EffectTheory& a, const EffectTheory& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != EffectKind::State) return true;
  return a.state && b.state && ty_equal(*a.state, *b.state);
}

}  // namespace cbpv
