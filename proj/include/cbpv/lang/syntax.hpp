#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbpv/cost.hpp"
#include "cbpv/rational.hpp"

namespace cbpv {

struct SourceLoc {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TyKind {
  // value (positive) types
  Unit,
  Bool,
  Nat,
  Prod,
  Sum,
  List,
  U,
  // computation (negative) types
  F,
  Arrow,
};

class Ty;
using TyPtr = std::shared_ptr<const Ty>;

/// A value type or a computation type. Immutable; share freely.
///
/// Sorts alternate strictly: U wraps a computation type, F wraps a value
/// type, and Arrow goes from a value type to a computation type. The
/// constructors throw std::invalid_argument when that is violated.
class Ty {
 public:
  static TyPtr unit();
  static TyPtr boolean();
  static TyPtr nat();
  static TyPtr prod(TyPtr a, TyPtr b);
  static TyPtr sum(TyPtr a, TyPtr b);
  /// List with a per-cons cost annotation (zero unless stated).
  static TyPtr list(TyPtr elem, Cost annotation = Cost::zero());
  static TyPtr thunk(TyPtr comp);
  static TyPtr ret(TyPtr value);
  static TyPtr arrow(TyPtr from, TyPtr to);

  TyKind kind() const { return kind_; }
  bool is_value() const { return kind_ != TyKind::F && kind_ != TyKind::Arrow; }
  bool is_computation() const { return !is_value(); }

  /// Children: Prod/Sum (left, right); List (elem); U (comp); F (value);
  /// Arrow (from, to).
  const TyPtr& left() const { return a_; }
  const TyPtr& right() const { return b_; }
  const TyPtr& elem() const { return a_; }
  const TyPtr& inner() const { return a_; }
  const TyPtr& from() const { return a_; }
  const TyPtr& to() const { return b_; }
  Cost annotation() const { return annotation_; }

  /// True when no U appears anywhere inside, so values have decidable
  /// structural equality.
  bool first_order() const;

  Ty(TyKind kind, TyPtr a, TyPtr b, Cost annotation)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), annotation_(annotation) {}

 private:
  TyKind kind_;
  TyPtr a_;
  TyPtr b_;
  Cost annotation_;
};

bool ty_equal(const Ty& a, const Ty& b);
inline bool ty_equal(const TyPtr& a, const TyPtr& b) { return ty_equal(*a, *b); }

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TermKind {
  // values
  Var,
  Triv,
  True,
  False,
  Zero,
  Suc,
  Nil,
  Cons,
  Pair,
  Inl,
  Inr,
  CostLit,
  // computations
  Ret,
  Bind,
  Lam,
  Ap,
  Step,
  NatRec,
  ListRec,
  Case,
  Split,
  If,
  Branch,
  Fail,
  Flip,
  Get,
  Set,
  Par,
};

/// A bound variable with its value type once known. The parser leaves the
/// type empty when the source omits it; elaboration fills every binder.
struct Binder {
  std::string name;
  TyPtr type;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Abstract syntax shared by both CBPV levels.
///
/// Thunks are transparent: a computation term in value position denotes its
/// suspension, and a variable of type U X in computation position forces it.
/// The sort discipline is enforced by the type checker, not by this class.
///
/// Layout by kind (children / binders):
///   Suc, Inl, Inr, Ret     (v)
///   Cons, Pair             (head, tail) / (left, right)
///   Bind                   (e, body)            / x
///   Lam                    (body)               / x
///   Ap                     (fn, arg)
///   Step                   (cost, body)
///   NatRec                 (n, zero, succ)      / k, ih
///   ListRec                (l, nil, cons)       / x, xs, ih
///   Case                   (s, left, right)     / x, y
///   Split                  (v, body)            / x, y
///   If                     (b, then, else)
///   Branch, Par            (e0, e1)
///   Flip                   (e0, e1) plus probability
///   Get                    (body)               / s
///   Set                    (v, body)
class Term {
 public:
  TermKind kind() const { return kind_; }
  const SourceLoc& loc() const { return loc_; }
  const std::string& name() const { return name_; }
  const std::vector<TermPtr>& kids() const { return kids_; }
  const TermPtr& kid(std::size_t i) const { return kids_.at(i); }
  const std::vector<Binder>& binders() const { return binders_; }
  const Binder& binder(std::size_t i) const { return binders_.at(i); }
  const Rational& prob() const { return prob_; }
  /// CostLit payload, or the per-cons charge recorded on ListRec.
  Cost cost() const { return cost_; }

  bool is_value_form() const { return kind_ <= TermKind::CostLit; }

  static TermPtr var(std::string name, SourceLoc loc = {});
  static TermPtr triv(SourceLoc loc = {});
  static TermPtr boolean(bool b, SourceLoc loc = {});
  static TermPtr zero(SourceLoc loc = {});
  static TermPtr suc(TermPtr v, SourceLoc loc = {});
  /// Suc^n(Zero).
  static TermPtr numeral(std::uint64_t n, SourceLoc loc = {});
  static TermPtr nil(SourceLoc loc = {});
  static TermPtr cons(TermPtr head, TermPtr tail, SourceLoc loc = {});
  static TermPtr pair(TermPtr a, TermPtr b, SourceLoc loc = {});
  static TermPtr inl(TermPtr v, SourceLoc loc = {});
  static TermPtr inr(TermPtr v, SourceLoc loc = {});
  static TermPtr cost_lit(Cost c, SourceLoc loc = {});

  static TermPtr ret(TermPtr v, SourceLoc loc = {});
  static TermPtr bind(TermPtr e, Binder x, TermPtr body, SourceLoc loc = {});
  static TermPtr lam(Binder x, TermPtr body, SourceLoc loc = {});
  static TermPtr ap(TermPtr fn, TermPtr arg, SourceLoc loc = {});
  static TermPtr step(TermPtr cost, TermPtr body, SourceLoc loc = {});
  static TermPtr step(Cost c, TermPtr body, SourceLoc loc = {});
  static TermPtr natrec(TermPtr n, TermPtr zero, Binder k, Binder ih,
                        TermPtr succ, SourceLoc loc = {});
  static TermPtr listrec(TermPtr l, TermPtr nil, Binder x, Binder xs, Binder ih,
                         TermPtr cons, SourceLoc loc = {},
                         Cost charge = Cost::zero());
  static TermPtr sum_case(TermPtr s, Binder x, TermPtr left, Binder y,
                          TermPtr right, SourceLoc loc = {});
  static TermPtr split(TermPtr v, Binder x, Binder y, TermPtr body,
                       SourceLoc loc = {});
  static TermPtr if_(TermPtr b, TermPtr t, TermPtr f, SourceLoc loc = {});
  static TermPtr branch(TermPtr e0, TermPtr e1, SourceLoc loc = {});
  static TermPtr fail(SourceLoc loc = {});
  /// Throws std::invalid_argument unless 0 <= p <= 1.
  static TermPtr flip(Rational p, TermPtr e0, TermPtr e1, SourceLoc loc = {});
  static TermPtr get(Binder s, TermPtr body, SourceLoc loc = {});
  static TermPtr set(TermPtr v, TermPtr body, SourceLoc loc = {});
  static TermPtr par(TermPtr e0, TermPtr e1, SourceLoc loc = {});

  /// Copy with replaced children/binders/charge; used by elaboration.
  TermPtr with(std::vector<TermPtr> kids, std::vector<Binder> binders) const;
  TermPtr with_charge(Cost charge) const;

  Term(TermKind kind, SourceLoc loc) : kind_(kind), loc_(loc) {}

 private:
  TermKind kind_;
  SourceLoc loc_;
  std::string name_;
  std::vector<TermPtr> kids_;
  std::vector<Binder> binders_;
  Rational prob_;
  Cost cost_;
};

/// Alpha-equivalence: compares binding structure by de Bruijn position and
/// ignores binder names, source locations, and (absent vs present) binder
/// annotations only when `ignore_annotations` is set.
bool alpha_equivalent(const Term& a, const Term& b,
                      bool ignore_annotations = false);

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const Term& t);

/// Number of nodes.
std::size_t term_size(const Term& t);

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

enum class EffectKind { Pure, NonDet, Prob, State };

struct EffectTheory {
  EffectKind kind = EffectKind::Pure;
  TyPtr state;  // only for State

  static EffectTheory pure() { return {EffectKind::Pure, nullptr}; }
  static EffectTheory nondet() { return {EffectKind::NonDet, nullptr}; }
  static EffectTheory prob() { return {EffectKind::Prob, nullptr}; }
  static EffectTheory state_of(TyPtr s) { return {EffectKind::State, std::move(s)}; }
};

bool theory_equal(const EffectTheory& a, const EffectTheory& b);

struct Program {
  std::string name;
  EffectTheory theory;
  CostMonoid monoid = CostMonoid::SeqNat;
  TermPtr body;
  TyPtr declared_ty;
};

}  // namespace cbpv
