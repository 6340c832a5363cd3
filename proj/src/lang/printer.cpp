#include "cbpv/lang/printer.hpp"

#include <fmt/format.h>

namespace cbpv {

namespace {

std::string cost_literal(Cost c) {
  if (c.work == c.span) return std::to_string(c.work);
  return fmt::format("(cost {} {})", c.work, c.span);
}

std::string binder(const Binder& b) {
  if (!b.type) return b.name;
  return fmt::format("({} : {})", b.name, print_type(*b.type));
}

std::string scope(const Term& t, std::initializer_list<std::size_t> binders,
                  std::size_t body) {
  std::string out = "(";
  for (auto i : binders) {
    out += binder(t.binder(i));
    out += ' ';
  }
  out += print_term(*t.kid(body));
  out += ')';
  return out;
}

// Suc^n(Zero) with n >= 1, if that is what t is.
std::optional<std::uint64_t> numeral(const Term& t) {
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (cur->kind() == TermKind::Suc) {
    ++n;
    cur = cur->kid(0).get();
  }
  if (n == 0 || cur->kind() != TermKind::Zero) return std::nullopt;
  return n;
}

}  // namespace

std::string print_type(const Ty& t) {
  switch (t.kind()) {
    case TyKind::Unit: return "unit";
    case TyKind::Bool: return "bool";
    case TyKind::Nat: return "nat";
    case TyKind::Prod:
      return fmt::format("(* {} {})", print_type(*t.left()), print_type(*t.right()));
    case TyKind::Sum:
      return fmt::format("(+ {} {})", print_type(*t.left()), print_type(*t.right()));
    case TyKind::List:
      if (t.annotation().is_zero()) return fmt::format("(list {})", print_type(*t.elem()));
      return fmt::format("(list {} {})", cost_literal(t.annotation()),
                         print_type(*t.elem()));
    case TyKind::U: return fmt::format("(U {})", print_type(*t.inner()));
    case TyKind::F: return fmt::format("(F {})", print_type(*t.inner()));
    case TyKind::Arrow:
      return fmt::format("(-> {} {})", print_type(*t.from()), print_type(*t.to()));
  }
  return "?";
}

std::string print_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return t.name();
    case TermKind::Triv: return "tt";
    case TermKind::True: return "true";
    case TermKind::False: return "false";
    case TermKind::Zero: return "zero";
    case TermKind::Suc:
      if (auto n = numeral(t)) return std::to_string(*n);
      return fmt::format("(suc {})", print_term(*t.kid(0)));
    case TermKind::Nil: return "nil";
    case TermKind::Cons:
      return fmt::format("(cons {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)));
    case TermKind::Pair:
      return fmt::format("(pair {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)));
    case TermKind::Inl: return fmt::format("(inl {})", print_term(*t.kid(0)));
    case TermKind::Inr: return fmt::format("(inr {})", print_term(*t.kid(0)));
    case TermKind::CostLit:
      // Outside a step slot a bare numeral would read back as a nat.
      return fmt::format("(cost {} {})", t.cost().work, t.cost().span);
    case TermKind::Ret: return fmt::format("(ret {})", print_term(*t.kid(0)));
    case TermKind::Bind:
      return fmt::format("(bind {} {})", print_term(*t.kid(0)), scope(t, {0}, 1));
    case TermKind::Lam:
      return fmt::format("(lam {} {})", binder(t.binder(0)), print_term(*t.kid(0)));
    case TermKind::Ap: {
      // Flatten left-nested applications.
      std::vector<const Term*> args;
      const Term* head = &t;
      while (head->kind() == TermKind::Ap) {
        args.push_back(head->kid(1).get());
        head = head->kid(0).get();
      }
      std::string out = "(" + print_term(*head);
      for (auto it = args.rbegin(); it != args.rend(); ++it) {
        out += ' ';
        out += print_term(**it);
      }
      return out + ")";
    }
    case TermKind::Step: {
      const Term& c = *t.kid(0);
      std::string cs;
      if (c.kind() == TermKind::CostLit) {
        cs = cost_literal(c.cost());
      } else if (auto n = numeral(c)) {
        // A bare numeral here would read back as a cost literal.
        cs = fmt::format("(suc {})", *n - 1 == 0 ? std::string("zero")
                                                 : std::to_string(*n - 1));
      } else {
        cs = print_term(c);
      }
      return fmt::format("(step {} {})", cs, print_term(*t.kid(1)));
    }
    case TermKind::NatRec:
      return fmt::format("(natrec {} {} {})", print_term(*t.kid(0)),
                         print_term(*t.kid(1)), scope(t, {0, 1}, 2));
    case TermKind::ListRec:
      return fmt::format("(listrec {} {} {})", print_term(*t.kid(0)),
                         print_term(*t.kid(1)), scope(t, {0, 1, 2}, 2));
    case TermKind::Case:
      return fmt::format("(case {} {} {})", print_term(*t.kid(0)), scope(t, {0}, 1),
                         scope(t, {1}, 2));
    case TermKind::Split:
      return fmt::format("(split {} {})", print_term(*t.kid(0)), scope(t, {0, 1}, 1));
    case TermKind::If:
      return fmt::format("(if {} {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)),
                         print_term(*t.kid(2)));
    case TermKind::Branch:
      return fmt::format("(branch {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)));
    case TermKind::Fail: return "fail";
    case TermKind::Flip:
      return fmt::format("(flip {} {} {})", to_string(t.prob()), print_term(*t.kid(0)),
                         print_term(*t.kid(1)));
    case TermKind::Get: return fmt::format("(get {})", scope(t, {0}, 0));
    case TermKind::Set:
      return fmt::format("(set {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)));
    case TermKind::Par:
      return fmt::format("(par {} {})", print_term(*t.kid(0)), print_term(*t.kid(1)));
  }
  return "?";
}

std::string print_theory(const EffectTheory& t) {
  switch (t.kind) {
    case EffectKind::Pure: return "pure";
    case EffectKind::NonDet: return "nondet";
    case EffectKind::Prob: return "prob";
    case EffectKind::State: return "state:" + print_type(*t.state);
  }
  return "?";
}

std::string print(const Program& p) {
  std::string out;
  if (!p.name.empty()) out += fmt::format("#name {}\n", p.name);
  out += fmt::format("#effect {}\n", print_theory(p.theory));
  out += fmt::format("#cost {}\n", name(p.monoid));
  out += fmt::format("(the {} {})\n", print_type(*p.declared_ty), print_term(*p.body));
  return out;
}

}  // namespace cbpv
