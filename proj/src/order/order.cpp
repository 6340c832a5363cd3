#include "cbpv/order/order.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <fmt/format.h>

#include "cbpv/lang/printer.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

Verdict Verdict::no(std::string lhs, std::string rhs, std::string why) {
  Verdict v;
  v.holds = false;
  v.witness = Witness{{}, std::move(lhs), std::move(rhs), std::move(why)};
  return v;
}

void CostRange::add(Cost c) {
  if (!max) {
    max = min = c;
    return;
  }
  max->work = std::max(max->work, c.work);
  max->span = std::max(max->span, c.span);
  min->work = std::min(min->work, c.work);
  min->span = std::min(min->span, c.span);
}

namespace {

class ValueEq {
 public:
  explicit ValueEq(const ClosureCompare* cc) : cc_(cc) {}

  bool equal(const Val& a, const Val& b, const Ty& t) {
    if (a == b) return true;
    if (!cc_ || t.first_order()) return false;
    switch (t.kind()) {
      case TyKind::Prod:
        return equal(a.first(), b.first(), *t.left()) && equal(a.second(), b.second(), *t.right());
      case TyKind::Sum:
        if (a.kind() != b.kind()) return false;
        return equal(a.payload(), b.payload(),
                     a.kind() == ValKind::Inl ? *t.left() : *t.right());
      case TyKind::List: {
        if (a.length() != b.length()) return false;
        auto xs = a.items();
        auto ys = b.items();
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (!equal(xs[i], ys[i], *t.elem())) return false;
        }
        return true;
      }
      case TyKind::U:
        return closures_equal(a, b, t.inner());
      default:
        return false;
    }
  }

  bool relative() const { return relative_; }

 private:
  bool closures_equal(const Val& a, const Val& b, const TyPtr& comp) {
    relative_ = true;
    auto [args, fin] = uncurry(comp);
    for (const auto& tuple : enumerate_args(args, cc_->settings.domain)) {
      Outcome oa = force(a, comp, tuple, cc_->settings);
      Outcome ob = force(b, comp, tuple, cc_->settings);
      if (!eq_outcome(oa, ob, cc_).holds) return false;
    }
    return true;
  }

  const ClosureCompare* cc_;
  bool relative_ = false;
};

void require_compatible(const Outcome& a, const Outcome& b) {
  if (a.theory() != b.theory()) throw OrderError("outcomes come from different effect theories");
  if (a.monoid != b.monoid) throw OrderError("outcomes use different cost monoids");
  if (a.value_ty && b.value_ty && !ty_equal(*a.value_ty, *b.value_ty)) {
    throw OrderError(fmt::format("outcomes have different result types {} and {}",
                                 print_type(*a.value_ty), print_type(*b.value_ty)));
  }
}

std::string show(CostMonoid m, const Result& r) {
  return fmt::format("({}, {})", to_string(m, r.cost), to_string(r.value));
}

bool first_order(const Outcome& o) { return !o.value_ty || o.value_ty->first_order(); }

Verdict finish(Verdict v, const ValueEq& eq) {
  v.domain_relative = eq.relative();
  return v;
}

}  // namespace

Verdict leq_outcome(const Outcome& lhs, const Outcome& rhs, const ClosureCompare* closures) {
  require_compatible(lhs, rhs);
  const CostMonoid m = lhs.monoid;
  ValueEq eq(closures);
  const Ty& vty = lhs.value_ty ? *lhs.value_ty : *Ty::unit();
  auto base = [&](const Result& a, const Result& b) {
    return cost_leq(m, a.cost, b.cost) && eq.equal(a.value, b.value, vty);
  };
  auto fail = [&](std::string why) {
    return finish(Verdict::no(to_string(lhs), to_string(rhs), std::move(why)), eq);
  };

  switch (lhs.theory()) {
    case EffectKind::Pure: {
      const auto& a = std::get<PureOut>(lhs.data).result;
      const auto& b = std::get<PureOut>(rhs.data).result;
      if (!base(a, b)) {
        return fail(fmt::format("{} is not below {}", show(m, a), show(m, b)));
      }
      return finish(Verdict::yes(), eq);
    }
    case EffectKind::NonDet: {
      const auto& as = std::get<NonDetOut>(lhs.data).branches;
      const auto& bs = std::get<NonDetOut>(rhs.data).branches;
      for (const auto& a : as) {
        if (std::none_of(bs.begin(), bs.end(), [&](const Result& b) { return base(a, b); })) {
          return fail(fmt::format("left result {} is below no right result", show(m, a)));
        }
      }
      for (const auto& b : bs) {
        if (std::none_of(as.begin(), as.end(), [&](const Result& a) { return base(a, b); })) {
          return fail(fmt::format("right result {} is above no left result", show(m, b)));
        }
      }
      return finish(Verdict::yes(), eq);
    }
    case EffectKind::Prob: {
      const auto& a = std::get<ProbOut>(lhs.data);
      const auto& b = std::get<ProbOut>(rhs.data);
      bool ok;
      if (m == CostMonoid::SeqNat && first_order(lhs)) {
        ok = cdf_dominance(a, b);
      } else {
        std::vector<Rational> wa, wb;
        for (const auto& w : a.dist) wa.push_back(w.weight);
        for (const auto& w : b.dist) wb.push_back(w.weight);
        ok = transportation_oracle(wa, wb, [&](std::size_t i, std::size_t j) {
          return base(a.dist[i].result, b.dist[j].result);
        });
      }
      if (!ok) return fail("no coupling of the two distributions relates every pair");
      return finish(Verdict::yes(), eq);
    }
    case EffectKind::State: {
      const auto& as = std::get<StateOut>(lhs.data).table;
      const auto& bs = std::get<StateOut>(rhs.data).table;
      if (as.size() != bs.size()) throw OrderError("state tables over different domains");
      for (std::size_t i = 0; i < as.size(); ++i) {
        const auto& a = as[i];
        const auto& b = bs[i];
        if (a.init != b.init) throw OrderError("state tables over different domains");
        bool ok = cost_leq(m, a.cost, b.cost) && a.final_state == b.final_state &&
                  eq.equal(a.value, b.value, vty);
        if (!ok) {
          return fail(fmt::format("from state {}: ({}, {}, {}) is not below ({}, {}, {})",
                                  to_string(a.init), to_string(m, a.cost),
                                  to_string(a.final_state), to_string(a.value),
                                  to_string(m, b.cost), to_string(b.final_state),
                                  to_string(b.value)));
        }
      }
      return finish(Verdict::yes(), eq);
    }
  }
  return Verdict::yes();
}

Verdict eq_outcome(const Outcome& lhs, const Outcome& rhs, const ClosureCompare* closures) {
  require_compatible(lhs, rhs);
  if (closures && !first_order(lhs)) {
    Verdict a = leq_outcome(lhs, rhs, closures);
    if (!a) return a;
    Verdict b = leq_outcome(rhs, lhs, closures);
    if (!b) {
      std::swap(b.witness->lhs, b.witness->rhs);
      return b;
    }
    a.domain_relative = true;
    return a;
  }
  bool same = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(rhs.data);
        if constexpr (std::is_same_v<T, PureOut>) {
          return x.result == y.result;
        } else if constexpr (std::is_same_v<T, NonDetOut>) {
          return x.branches == y.branches;
        } else if constexpr (std::is_same_v<T, ProbOut>) {
          if (x.dist.size() != y.dist.size()) return false;
          for (std::size_t i = 0; i < x.dist.size(); ++i) {
            if (x.dist[i].result != y.dist[i].result || x.dist[i].weight != y.dist[i].weight) {
              return false;
            }
          }
          return true;
        } else {
          if (x.table.size() != y.table.size()) return false;
          for (std::size_t i = 0; i < x.table.size(); ++i) {
            const auto& a = x.table[i];
            const auto& b = y.table[i];
            if (a.init != b.init || a.cost != b.cost || a.final_state != b.final_state ||
                a.value != b.value) {
              return false;
            }
          }
          return true;
        }
      },
      lhs.data);
  if (same) return Verdict::yes();
  return Verdict::no(to_string(lhs), to_string(rhs), "outcomes differ");
}

bool transportation_oracle(const std::vector<Rational>& lhs, const std::vector<Rational>& rhs,
                           const std::function<bool(std::size_t, std::size_t)>& related) {
  // Common denominator.
  BigInt d = 1;
  for (const auto* side : {&lhs, &rhs}) {
    for (const auto& w : *side) {
      BigInt q = boost::multiprecision::denominator(w);
      d = d / boost::multiprecision::gcd(d, q) * q;
    }
  }
  auto scaled = [&](const Rational& w) {
    return BigInt(boost::multiprecision::numerator(w) * (d / boost::multiprecision::denominator(w)));
  };
  BigInt total_l = 0, total_r = 0;
  for (const auto& w : lhs) total_l += scaled(w);
  for (const auto& w : rhs) total_r += scaled(w);
  if (total_l != total_r) return false;
  if (total_l == 0) return true;

  // Nodes: source, lhs..., rhs..., sink. Residual capacities in a dense
  // matrix; the instances are small.
  const std::size_t n = lhs.size(), m = rhs.size();
  const std::size_t src = 0, sink = n + m + 1, size = n + m + 2;
  std::vector<std::vector<BigInt>> cap(size, std::vector<BigInt>(size, 0));
  for (std::size_t i = 0; i < n; ++i) cap[src][1 + i] = scaled(lhs[i]);
  for (std::size_t j = 0; j < m; ++j) cap[1 + n + j][sink] = scaled(rhs[j]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (related(i, j)) cap[1 + i][1 + n + j] = total_l;
    }
  }

  // Edmonds-Karp.
  BigInt flow = 0;
  while (true) {
    std::vector<long> parent(size, -1);
    parent[src] = static_cast<long>(src);
    std::deque<std::size_t> queue{src};
    while (!queue.empty() && parent[sink] < 0) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < size; ++v) {
        if (parent[v] < 0 && cap[u][v] > 0) {
          parent[v] = static_cast<long>(u);
          queue.push_back(v);
        }
      }
    }
    if (parent[sink] < 0) break;
    BigInt push = total_l;
    for (std::size_t v = sink; v != src; v = static_cast<std::size_t>(parent[v])) {
      push = std::min(push, cap[static_cast<std::size_t>(parent[v])][v]);
    }
    for (std::size_t v = sink; v != src; v = static_cast<std::size_t>(parent[v])) {
      auto u = static_cast<std::size_t>(parent[v]);
      cap[u][v] -= push;
      cap[v][u] += push;
    }
    flow += push;
  }
  return flow == total_l;
}

bool cdf_dominance(const ProbOut& lhs, const ProbOut& rhs) {
  using Masses = std::map<std::uint64_t, Rational>;
  auto group = [](const ProbOut& d) {
    std::map<Val, Masses> out;
    for (const auto& w : d.dist) out[w.result.value][w.result.cost.work] += w.weight;
    return out;
  };
  auto l = group(lhs);
  auto r = group(rhs);
  if (l.size() != r.size()) return false;
  for (const auto& [v, lm] : l) {
    auto it = r.find(v);
    if (it == r.end()) return false;
    const Masses& rm = it->second;
    // Tail masses P(cost > t) at every breakpoint t; the left tail may never
    // exceed the right one, and the totals must agree.
    Rational lt = 0, rt = 0;
    for (const auto& [c, w] : lm) lt += w;
    for (const auto& [c, w] : rm) rt += w;
    if (lt != rt) return false;
    std::vector<std::uint64_t> points;
    for (const auto& [c, w] : lm) points.push_back(c);
    for (const auto& [c, w] : rm) points.push_back(c);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto li = lm.begin();
    auto ri = rm.begin();
    for (auto t : points) {
      while (li != lm.end() && li->first <= t) lt -= (li++)->second;
      while (ri != rm.end() && ri->first <= t) rt -= (ri++)->second;
      if (lt > rt) return false;
    }
  }
  return true;
}

bool coupling_by_flow(const ProbOut& lhs, const ProbOut& rhs, CostMonoid m) {
  std::vector<Rational> wa, wb;
  for (const auto& w : lhs.dist) wa.push_back(w.weight);
  for (const auto& w : rhs.dist) wb.push_back(w.weight);
  return transportation_oracle(wa, wb, [&](std::size_t i, std::size_t j) {
    const auto& a = lhs.dist[i].result;
    const auto& b = rhs.dist[j].result;
    return cost_leq(m, a.cost, b.cost) && a.value == b.value;
  });
}

TabulatedCheck check_programs(const Program& lhs, const Program& rhs, Judgment j, EvalMode mode,
                              const DomainConfig& cfg, const std::vector<Val>& prefix) {
  Program l = elaborate(lhs);
  Program r = elaborate(rhs);
  if (!ty_equal(*l.declared_ty, *r.declared_ty)) {
    throw OrderError(fmt::format("programs have different types {} and {}",
                                 print_type(*l.declared_ty), print_type(*r.declared_ty)));
  }
  if (!theory_equal(l.theory, r.theory)) throw OrderError("programs use different effect theories");
  if (l.monoid != r.monoid) throw OrderError("programs use different cost monoids");

  auto [args, fin] = uncurry(l.declared_ty);
  if (prefix.size() > args.size()) throw OrderError("more fixed arguments than the type takes");
  std::vector<TyPtr> rest(args.begin() + static_cast<long>(prefix.size()), args.end());
  for (const auto& t : rest) {
    if (!t->first_order()) {
      throw OrderError("cannot tabulate over higher-order argument type " + print_type(*t));
    }
  }

  EvalSettings s = settings_for(l, mode, cfg);
  std::optional<ClosureCompare> cc;
  if (!fin->inner()->first_order()) cc = ClosureCompare{s};

  TabulatedCheck out;
  for (const auto& tuple : enumerate_args(rest, cfg)) {
    std::vector<Val> full = prefix;
    full.insert(full.end(), tuple.begin(), tuple.end());
    Outcome a = run(l.body, l.declared_ty, Env{}, full, s);
    Outcome b = run(r.body, r.declared_ty, Env{}, full, s);
    for (const auto& x : results(a)) out.lhs_cost.add(x.cost);
    for (const auto& x : results(b)) out.rhs_cost.add(x.cost);
    ++out.inputs;
    Verdict v = j == Judgment::Leq ? leq_outcome(a, b, cc ? &*cc : nullptr)
                                   : eq_outcome(a, b, cc ? &*cc : nullptr);
    if (v.domain_relative) out.verdict.domain_relative = true;
    if (!v) {
      v.witness->input = tuple;
      v.domain_relative = out.verdict.domain_relative;
      out.verdict = std::move(v);
      break;
    }
  }
  return out;
}

Verdict leq_program(const Program& lhs, const Program& rhs, EvalMode mode, const DomainConfig& cfg,
                    const std::vector<Val>& prefix) {
  return check_programs(lhs, rhs, Judgment::Leq, mode, cfg, prefix).verdict;
}

Verdict ext_equal_program(const Program& lhs, const Program& rhs, const DomainConfig& cfg,
                          const std::vector<Val>& prefix) {
  return check_programs(lhs, rhs, Judgment::Eq, EvalMode::Extensional, cfg, prefix).verdict;
}

}  // namespace cbpv
