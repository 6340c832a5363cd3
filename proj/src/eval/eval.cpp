#include "cbpv/eval/eval.hpp"

#include <pthread.h>

#include <algorithm>
#include <cstdint>

#include <fmt/format.h>

#include "cbpv/lang/parser.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

namespace {

// One path through the effect tree: its probability mass (1 outside the
// probabilistic theory), accumulated cost, current state, and result.
struct Branch {
  Rational weight{1};
  Cost cost;
  Val state;
  Val value;
};
using Branches = std::vector<Branch>;

struct ArgNode {
  Val v;
  std::shared_ptr<const ArgNode> next;
};
using Args = std::shared_ptr<const ArgNode>;

Args push(Val v, Args rest) {
  return std::make_shared<const ArgNode>(ArgNode{std::move(v), std::move(rest)});
}

constexpr std::size_t kMaxBranches = 1'000'000;

[[noreturn]] void stuck(const Term& t, const std::string& what) {
  throw EvalError(EvalError::Kind::Stuck,
                  fmt::format("{}:{}: stuck: {}", t.loc().line, t.loc().column, what));
}

// Lowest address the evaluator may reach on this thread's stack, keeping a
// margin for the frames of a single step.
std::uintptr_t stack_floor() {
  thread_local std::uintptr_t floor = [] {
    std::uintptr_t lo = 0;
#ifdef __linux__
    pthread_attr_t attr;
    if (pthread_getattr_np(pthread_self(), &attr) == 0) {
      void* addr = nullptr;
      std::size_t size = 0;
      if (pthread_attr_getstack(&attr, &addr, &size) == 0) {
        lo = reinterpret_cast<std::uintptr_t>(addr) + std::min<std::size_t>(size / 4, 1 << 20);
      }
      pthread_attr_destroy(&attr);
    }
#endif
    return lo;
  }();
  return floor;
}

class Machine {
 public:
  explicit Machine(const EvalSettings& s)
      : s_(s), counting_(s.mode == EvalMode::CostCounting), stack_floor_(stack_floor()) {}

  Branches run(const TermPtr& tp, const Env& env, const Args& args, const Branch& from) {
    char probe;
    if (reinterpret_cast<std::uintptr_t>(&probe) < stack_floor_) {
      throw EvalError(EvalError::Kind::TooDeep,
                      "evaluation nested too deeply for the thread's stack");
    }
    const Term& t = *tp;
    switch (t.kind()) {
      case TermKind::Var:
        return force(lookup(t, env), args, from);
      case TermKind::Ret: {
        if (args) stuck(t, "ret applied to an argument");
        Branch b = from;
        b.value = value(t.kid(0), env);
        return {std::move(b)};
      }
      case TermKind::Bind: {
        Branches first = run(t.kid(0), env, nullptr, from);
        if (first.size() == 1) {
          return run(t.kid(1), env.extended(t.binder(0).name, first[0].value), args, first[0]);
        }
        Branches out;
        for (const auto& b : first) {
          auto more = run(t.kid(1), env.extended(t.binder(0).name, b.value), args, b);
          append(out, std::move(more));
        }
        tidy(out);
        return out;
      }
      case TermKind::Lam:
        if (!args) stuck(t, "lambda with no argument");
        return run(t.kid(0), env.extended(t.binder(0).name, args->v), args->next, from);
      case TermKind::Ap:
        return run(t.kid(0), env, push(value(t.kid(1), env), args), from);
      case TermKind::Step: {
        Branch b = from;
        b.cost += step_cost(t.kid(0), env);
        return run(t.kid(1), env, args, b);
      }
      case TermKind::NatRec: {
        Val n = value(t.kid(0), env);
        if (n.kind() != ValKind::Nat) stuck(t, "natrec on a non-natural");
        return natrec(tp, env, n, args, from);
      }
      case TermKind::ListRec: {
        Val l = value(t.kid(0), env);
        if (l.kind() != ValKind::List) stuck(t, "listrec on a non-list");
        return listrec(tp, env, l, args, from);
      }
      case TermKind::Case: {
        Val s = value(t.kid(0), env);
        if (s.kind() == ValKind::Inl) {
          return run(t.kid(1), env.extended(t.binder(0).name, s.payload()), args, from);
        }
        if (s.kind() == ValKind::Inr) {
          return run(t.kid(2), env.extended(t.binder(1).name, s.payload()), args, from);
        }
        stuck(t, "case on a non-sum");
      }
      case TermKind::Split: {
        Val p = value(t.kid(0), env);
        if (p.kind() != ValKind::Pair) stuck(t, "split on a non-pair");
        Env inner = env.extended(t.binder(0).name, p.first())
                        .extended(t.binder(1).name, p.second());
        return run(t.kid(1), inner, args, from);
      }
      case TermKind::If: {
        Val b = value(t.kid(0), env);
        if (b.kind() != ValKind::Bool) stuck(t, "if on a non-boolean");
        return run(t.kid(b.as_bool() ? 1 : 2), env, args, from);
      }
      case TermKind::Branch: {
        require(t, EffectKind::NonDet);
        Branches out = run(t.kid(0), env, args, from);
        append(out, run(t.kid(1), env, args, from));
        tidy(out);
        return out;
      }
      case TermKind::Fail:
        require(t, EffectKind::NonDet);
        return {};
      case TermKind::Flip: {
        require(t, EffectKind::Prob);
        const Rational& p = t.prob();
        if (p == 0) return run(t.kid(0), env, args, from);
        if (p == 1) return run(t.kid(1), env, args, from);
        Branch b0 = from;
        b0.weight *= 1 - p;
        Branch b1 = from;
        b1.weight *= p;
        Branches out = run(t.kid(0), env, args, b0);
        append(out, run(t.kid(1), env, args, b1));
        tidy(out);
        return out;
      }
      case TermKind::Get:
        require(t, EffectKind::State);
        return run(t.kid(0), env.extended(t.binder(0).name, from.state), args, from);
      case TermKind::Set: {
        require(t, EffectKind::State);
        Branch b = from;
        b.state = value(t.kid(0), env);
        return run(t.kid(1), env, args, b);
      }
      case TermKind::Par: {
        require(t, EffectKind::Pure);
        if (s_.monoid != CostMonoid::ParWorkSpan) stuck(t, "par under the sequential monoid");
        if (args) stuck(t, "par applied to an argument");
        Branch zero;
        zero.state = from.state;
        Branches a = run(t.kid(0), env, nullptr, zero);
        Branches b = run(t.kid(1), env, nullptr, zero);
        if (a.size() != 1 || b.size() != 1) {
          throw EvalError(EvalError::Kind::Unsupported, "par over a non-deterministic side");
        }
        Branch out = from;
        out.cost += parallel(a[0].cost, b[0].cost);
        out.value = Val::pair(a[0].value, b[0].value);
        return {std::move(out)};
      }
      default:
        stuck(t, "value term in computation position");
    }
  }

  Val value(const TermPtr& tp, const Env& env) {
    const Term& t = *tp;
    switch (t.kind()) {
      case TermKind::Var: return lookup(t, env);
      case TermKind::Triv: return Val::unit();
      case TermKind::True: return Val::boolean(true);
      case TermKind::False: return Val::boolean(false);
      case TermKind::Zero: return Val::nat(0);
      case TermKind::Suc: {
        Val n = value(t.kid(0), env);
        if (n.kind() != ValKind::Nat) stuck(t, "suc of a non-natural");
        return Val::nat(n.as_nat() + 1);
      }
      case TermKind::Nil: return Val::nil();
      case TermKind::Cons: {
        Val tail = value(t.kid(1), env);
        if (tail.kind() != ValKind::List) stuck(t, "cons onto a non-list");
        return Val::cons(value(t.kid(0), env), std::move(tail));
      }
      case TermKind::Pair: return Val::pair(value(t.kid(0), env), value(t.kid(1), env));
      case TermKind::Inl: return Val::inl(value(t.kid(0), env));
      case TermKind::Inr: return Val::inr(value(t.kid(0), env));
      case TermKind::CostLit: stuck(t, "cost literal used as a value");
      default:
        // A computation in value position is its own thunk.
        return Val::thunk(std::make_shared<const Thunk>(Thunk{Thunk::Kind::Closure, tp, env, {}}));
    }
  }

  Branches force(const Val& v, const Args& args, const Branch& from) {
    if (v.kind() != ValKind::Thunk) {
      throw EvalError(EvalError::Kind::Stuck, "forcing a non-thunk value " + to_string(v));
    }
    const Thunk& th = v.thunk();
    if (th.kind == Thunk::Kind::Closure) return run(th.term, th.env, args, from);
    if (th.term->kind() == TermKind::NatRec) return natrec(th.term, th.env, th.at, args, from);
    return listrec(th.term, th.env, th.at, args, from);
  }

 private:
  Val lookup(const Term& t, const Env& env) {
    try {
      return env.lookup(t.name());
    } catch (const std::out_of_range&) {
      stuck(t, "unbound variable " + t.name());
    }
  }

  Val recursor_at(const TermPtr& rec, const Env& env, Val at) {
    return Val::thunk(
        std::make_shared<const Thunk>(Thunk{Thunk::Kind::Recursor, rec, env, std::move(at)}));
  }

  Branches natrec(const TermPtr& rec, const Env& env, const Val& n, const Args& args,
                  const Branch& from) {
    const Term& t = *rec;
    if (n.as_nat() == 0) return run(t.kid(1), env, args, from);
    Val k = Val::nat(n.as_nat() - 1);
    Env inner = env.extended(t.binder(0).name, k)
                    .extended(t.binder(1).name, recursor_at(rec, env, k));
    return run(t.kid(2), inner, args, from);
  }

  Branches listrec(const TermPtr& rec, const Env& env, const Val& l, const Args& args,
                   const Branch& from) {
    const Term& t = *rec;
    if (l.is_nil()) return run(t.kid(1), env, args, from);
    Branch b = from;
    if (counting_) b.cost += t.cost();
    Env inner = env.extended(t.binder(0).name, l.head())
                    .extended(t.binder(1).name, l.tail())
                    .extended(t.binder(2).name, recursor_at(rec, env, l.tail()));
    return run(t.kid(2), inner, args, b);
  }

  Cost step_cost(const TermPtr& c, const Env& env) {
    if (!counting_) return Cost::zero();
    if (c->kind() == TermKind::CostLit) return c->cost();
    Val n = value(c, env);
    if (n.kind() != ValKind::Nat) stuck(*c, "step cost is not a natural");
    return Cost::units(n.as_nat());
  }

  void require(const Term& t, EffectKind k) {
    if (s_.theory.kind != k) {
      throw EvalError(EvalError::Kind::TheoryViolation,
                      fmt::format("{}:{}: effect operation outside the theory '{}'",
                                  t.loc().line, t.loc().column, print_theory(s_.theory)));
    }
  }

  static void append(Branches& out, Branches&& more) {
    if (out.size() + more.size() > kMaxBranches) {
      throw EvalError(EvalError::Kind::DomainTooLarge, "too many effect branches");
    }
    out.insert(out.end(), std::make_move_iterator(more.begin()),
               std::make_move_iterator(more.end()));
  }

  // Keeps the branch list canonical: duplicates merge (idempotence of
  // branch; equal outcomes of a flip add their mass).
  void tidy(Branches& bs) const {
    if (bs.size() < 2) return;
    auto key_less = [](const Branch& a, const Branch& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (auto c = a.state <=> b.state; c != 0) return c < 0;
      return a.value < b.value;
    };
    auto key_eq = [](const Branch& a, const Branch& b) {
      return a.cost == b.cost && a.state == b.state && a.value == b.value;
    };
    std::sort(bs.begin(), bs.end(), key_less);
    Branches out;
    out.reserve(bs.size());
    for (auto& b : bs) {
      if (!out.empty() && key_eq(out.back(), b)) {
        if (s_.theory.kind == EffectKind::Prob) out.back().weight += b.weight;
      } else {
        out.push_back(std::move(b));
      }
    }
    bs = std::move(out);
  }

  const EvalSettings& s_;
  bool counting_;
  std::uintptr_t stack_floor_;
};

}  // namespace

std::pair<std::vector<TyPtr>, TyPtr> uncurry(const TyPtr& comp) {
  std::vector<TyPtr> args;
  TyPtr cur = comp;
  while (cur->kind() == TyKind::Arrow) {
    args.push_back(cur->from());
    cur = cur->to();
  }
  if (cur->kind() != TyKind::F) {
    throw EvalError(EvalError::Kind::Stuck, "expected a computation type ending in F A");
  }
  return {std::move(args), cur};
}

Outcome run(const TermPtr& t, const TyPtr& ty, const Env& env, const std::vector<Val>& args,
            const EvalSettings& s) {
  TyPtr cur = ty;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (cur->kind() != TyKind::Arrow) {
      throw EvalError(EvalError::Kind::Stuck, "too many arguments for type " + print_type(*ty));
    }
    cur = cur->to();
  }
  if (cur->kind() != TyKind::F) {
    throw EvalError(EvalError::Kind::Stuck,
                    "evaluation needs type F A after arguments, got " + print_type(*cur));
  }

  Args stack;
  for (auto it = args.rbegin(); it != args.rend(); ++it) stack = push(*it, stack);

  Machine m(s);
  Outcome out;
  out.monoid = s.monoid;
  out.value_ty = cur->inner();

  auto single = [](Branches bs) {
    if (bs.size() != 1) {
      throw EvalError(EvalError::Kind::TheoryViolation,
                      fmt::format("deterministic theory produced {} results", bs.size()));
    }
    return std::move(bs.front());
  };

  switch (s.theory.kind) {
    case EffectKind::Pure: {
      Branch b = single(m.run(t, env, stack, Branch{}));
      out.data = PureOut{{b.cost, b.value}};
      break;
    }
    case EffectKind::NonDet: {
      NonDetOut nd;
      for (auto& b : m.run(t, env, stack, Branch{})) nd.branches.push_back({b.cost, b.value});
      out.data = std::move(nd);
      break;
    }
    case EffectKind::Prob: {
      ProbOut pr;
      for (auto& b : m.run(t, env, stack, Branch{})) {
        pr.dist.push_back({{b.cost, b.value}, b.weight});
      }
      out.data = std::move(pr);
      break;
    }
    case EffectKind::State: {
      if (!s.theory.state || !s.theory.state->first_order()) {
        throw EvalError(EvalError::Kind::Unsupported, "state type must be first-order");
      }
      auto states = state_domain(*s.theory.state, s.domain);
      StateOut st;
      for (const auto& init : states) {
        Branch start;
        start.state = init;
        Branch b = single(m.run(t, env, stack, start));
        if (s.domain.strict_states &&
            std::find(states.begin(), states.end(), b.state) == states.end()) {
          throw EvalError(EvalError::Kind::StateEscape,
                          fmt::format("final state {} from initial state {} is outside the "
                                      "state domain",
                                      to_string(b.state), to_string(init)));
        }
        st.table.push_back({init, b.cost, b.state, b.value});
      }
      out.data = std::move(st);
      break;
    }
  }
  normalize(out);
  return out;
}

Outcome force(const Val& thunk, const TyPtr& ty, const std::vector<Val>& args,
              const EvalSettings& s) {
  static const TermPtr f = Term::var("%thunk");
  return run(f, ty, Env{}.extended("%thunk", thunk), args, s);
}

Val parse_value(std::string_view text, const TyPtr& ty) {
  TermPtr t = parse_term("(ret " + std::string(text) + ")");
  TyPtr fty = Ty::ret(ty);
  t = elaborate_check(Ctx{}, t, fty, CheckOptions{});
  EvalSettings s{EffectTheory::pure(), CostMonoid::SeqNat, EvalMode::CostCounting, {}};
  return std::get<PureOut>(run(t, fty, Env{}, {}, s).data).result.value;
}

EvalSettings settings_for(const Program& p, EvalMode mode, const DomainConfig& cfg) {
  return EvalSettings{p.theory, p.monoid, mode, cfg};
}

Outcome eval(const Program& p, EvalMode mode, const DomainConfig& cfg) {
  return eval_applied(p, {}, mode, cfg);
}

Outcome eval_applied(const Program& p, const std::vector<Val>& args, EvalMode mode,
                     const DomainConfig& cfg) {
  Program e = elaborate(p);
  return run(e.body, e.declared_ty, Env{}, args, settings_for(e, mode, cfg));
}

std::vector<std::pair<Val, Outcome>> eval_fn(const Program& p, EvalMode mode,
                                             const DomainConfig& cfg,
                                             const std::vector<Val>& domain) {
  Program e = elaborate(p);
  auto s = settings_for(e, mode, cfg);
  std::vector<std::pair<Val, Outcome>> out;
  out.reserve(domain.size());
  for (const auto& v : domain) out.emplace_back(v, run(e.body, e.declared_ty, Env{}, {v}, s));
  return out;
}

}  // namespace cbpv
