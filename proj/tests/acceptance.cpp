// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cbpv/bench/verify.hpp"
#include "cbpv/eval/stack.hpp"
#include "cbpv/laws/generator.hpp"
#include "cbpv/order/order.hpp"
#include "cbpv/types/check.hpp"

namespace {

using namespace cbpv;
using Clock = std::chrono::steady_clock;

// Pinned limits. Every comparison below is exact; these are the only
// tolerances in the run.
constexpr double kCorpusSeconds = 300;
constexpr double kSortEqualSeconds = 30;
constexpr std::size_t kLawTrials = 500;
constexpr std::size_t kPreorderInstances = 1000;
constexpr std::size_t kOraclePairs = 1000;

struct Criterion {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Program program(const std::string& src) { return elaborate(parse_program(src)); }

const Result& pure_result(const Outcome& o) { return std::get<PureOut>(o.data).result; }

// 1
Criterion corpus_conformance() {
  RunConfig cfg;
  cfg.laws = false;
  auto t0 = Clock::now();
  auto reports = run_all(cfg);
  double secs = seconds_since(t0);
  std::size_t specs = 0, held = 0;
  std::string failed;
  for (const auto& r : reports) {
    if (r.name == "reference-helpers") {
      if (!r.ok()) failed += " reference-helpers";
      continue;
    }
    ++specs;
    if (r.ok()) {
      ++held;
    } else {
      failed += " " + r.name;
    }
  }
  bool pass = held == specs && specs == corpus().size() && failed.empty() &&
              secs <= kCorpusSeconds;
  return {pass, fmt::format("{}/{} specs hold, {:.1f}s (limit {:.0f}s){}", held, specs, secs,
                            kCorpusSeconds, failed.empty() ? "" : "; failed:" + failed)};
}

// 2
Criterion double_closed_form() {
  Program d = library_program("double");
  for (std::uint64_t n = 0; n <= 16; ++n) {
    Result r = pure_result(eval_applied(d, {Val::nat(n)}, EvalMode::CostCounting));
    if (r.cost != Cost::units(n) || r.value != Val::nat(2 * n)) {
      return {false, fmt::format("double {} = ({}, {})", n, r.cost.work, to_string(r.value))};
    }
  }
  return {true, "double n = (n, 2n) for n = 0..16"};
}

// Comparisons made by insertion sort, counted directly.
std::uint64_t insertion_comparisons(std::vector<std::uint64_t> l) {
  std::vector<std::uint64_t> sorted;
  std::uint64_t count = 0;
  for (auto it = l.rbegin(); it != l.rend(); ++it) {
    std::size_t i = 0;
    while (i < sorted.size()) {
      ++count;
      if (*it <= sorted[i]) break;
      ++i;
    }
    sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(i), *it);
  }
  return count;
}

// 3
Criterion isort_worst_case() {
  Program isort = library_program("isort");
  std::string costs;
  for (std::uint64_t k = 0; k <= 6; ++k) {
    std::vector<std::uint64_t> l;
    for (std::uint64_t i = k; i-- > 0;) l.push_back(i);
    Result r = pure_result(eval_applied(isort, {Val::nat_list(l)}, EvalMode::CostCounting));
    std::uint64_t c = r.cost.work;
    std::vector<std::uint64_t> sorted = l;
    std::sort(sorted.begin(), sorted.end());
    std::int64_t ks = static_cast<std::int64_t>(k);
    bool ok = c == k * (k - (k > 0 ? 1 : 0)) / 2 && c == insertion_comparisons(l) && c <= k * k &&
              static_cast<std::int64_t>(c) >= ks - 1 && r.value == Val::nat_list(sorted);
    if (!ok) return {false, fmt::format("k = {}: cost {}", k, c)};
    costs += (costs.empty() ? "" : " ") + std::to_string(c);
  }
  return {true, "reverse-sorted k = 0..6 cost " + costs + " = k(k-1)/2"};
}

// Binomial(n, 1/2) cost distribution, from Pascal's triangle.
std::vector<Rational> binomial_weights(std::size_t n) {
  std::vector<Rational> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j] / 2;
      next[j + 1] += row[j] / 2;
    }
    row = next;
  }
  return row;
}

// 4
Criterion sublist_binomial() {
  Program sublist = library_program("sublist");
  Program binomial = library_program("binomial");
  DomainConfig dom;
  dom.list_len = 8;
  dom.elems = 2;
  std::size_t lists = 0;
  for (const Val& l : enumerate(*Ty::list(Ty::nat()), dom)) {
    Outcome s = eval_applied(sublist, {l}, EvalMode::CostCounting);
    for (auto& w : std::get<ProbOut>(s.data).dist) w.result.value = Val::unit();
    s.value_ty = Ty::unit();
    normalize(s);
    std::size_t n = l.length();
    Outcome b = eval_applied(binomial, {Val::nat(n)}, EvalMode::CostCounting);
    Verdict v = eq_outcome(s, b);
    if (!v) return {false, "sublist " + to_string(l) + ": " + v.witness->explanation};
    ++lists;
  }
  for (std::uint64_t n = 0; n <= 8; ++n) {
    Outcome b = eval_applied(binomial, {Val::nat(n)}, EvalMode::CostCounting);
    const auto& dist = std::get<ProbOut>(b.data).dist;
    auto expect = binomial_weights(n);
    bool shape = dist.size() == n + 1;
    for (std::size_t k = 0; shape && k <= n; ++k) {
      shape = dist[k].result.cost == Cost::units(k) && dist[k].weight == expect[k];
    }
    if (!shape) return {false, fmt::format("binomial {} is not Binomial({}, 1/2)", n, n)};
    Program bound = program(fmt::format("#effect prob\n(the (F unit) (step {} (ret tt)))", n));
    Outcome top = eval(bound, EvalMode::CostCounting);
    if (!leq_outcome(b, top)) return {false, fmt::format("binomial {} not <= step^{}", n, n)};
    if (n > 0 && leq_outcome(top, b)) {
      return {false, fmt::format("step^{} <= binomial {} should fail", n, n)};
    }
  }
  return {true, fmt::format("{} lists equal in distribution; binomial n <= step^n for n = 0..8",
                            lists)};
}

// 5
Criterion pervasive_nondet() {
  const std::string e = "(branch (step 3 (ret true)) (step 12 (ret false)))";
  Outcome lhs1 = eval(program("#effect nondet\n(the (F bool) " + e + ")"), EvalMode::CostCounting);
  Outcome rhs1 = eval(program("#effect nondet\n(the (F bool) (step 12 (branch (ret true) (ret false))))"),
                      EvalMode::CostCounting);
  Outcome lhs2 = eval(program("#effect nondet\n(the (F unit) (bind " + e + " ((x : bool) (ret tt))))"),
                      EvalMode::CostCounting);
  Outcome rhs2 = eval(program("#effect nondet\n(the (F unit) (step 12 (ret tt)))"),
                      EvalMode::CostCounting);
  Verdict up1 = leq_outcome(lhs1, rhs1), up2 = leq_outcome(lhs2, rhs2);
  Verdict down1 = leq_outcome(rhs1, lhs1), down2 = leq_outcome(rhs2, lhs2);
  bool pass = up1 && up2 && !down1 && down1.witness && !down2 && down2.witness;
  std::string detail = fmt::format("e <= step^12 (true|false): {}; e;tt <= step^12 tt: {}", up1.holds,
                                   up2.holds);
  if (!down1.holds && down1.witness) detail += "; reversed fails: " + down1.witness->explanation;
  if (!down2.holds && down2.witness) detail += "; reversed fails: " + down2.witness->explanation;
  return {pass, detail};
}

// 6
Criterion law_suite() {
  std::size_t passed = 0, caught = 0;
  std::string failed;
  for (const auto& law : catalog()) {
    if (check_law(law, kLawTrials, 1).passed()) {
      ++passed;
    } else {
      failed += " " + law.name;
    }
  }
  for (const auto& law : mutation_fixtures()) {
    LawReport r = check_law(law, kLawTrials, 1);
    if (!r.passed() && !r.failures.empty()) {
      ++caught;
    } else {
      failed += " mutant:" + law.name;
    }
  }
  bool pass = catalog().size() == 25 && passed == 25 && mutation_fixtures().size() == 5 && caught == 5;
  return {pass, fmt::format("{}/{} laws pass at {} trials; {}/{} mutations caught{}", passed,
                            catalog().size(), kLawTrials, caught, mutation_fixtures().size(),
                            failed.empty() ? "" : "; failed:" + failed)};
}

// Adds a random non-negative amount to every cost in the outcome.
Outcome raise(Outcome o, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, 3);
  auto bump = [&](Cost& c) {
    std::uint64_t w = d(rng);
    c = o.monoid == CostMonoid::SeqNat ? c + Cost::units(w) : c + Cost::of(w, d(rng));
  };
  std::visit(
      [&](auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, PureOut>) {
          bump(data.result.cost);
        } else if constexpr (std::is_same_v<T, NonDetOut>) {
          for (auto& r : data.branches) bump(r.cost);
        } else if constexpr (std::is_same_v<T, ProbOut>) {
          for (auto& w : data.dist) bump(w.result.cost);
        } else {
          for (auto& row : data.table) bump(row.cost);
        }
      },
      o.data);
  normalize(o);
  return o;
}

// 7
Criterion preorder_properties() {
  const std::vector<EffectTheory> theories = {EffectTheory::pure(), EffectTheory::nondet(),
                                              EffectTheory::prob(),
                                              EffectTheory::state_of(Ty::nat())};
  DomainConfig dom;
  dom.state_max = 3;
  GenOptions opts;
  opts.max_depth = 4;
  std::mt19937_64 rng(7);
  std::size_t refl = 0, trans = 0, iff = 0, strict = 0;
  for (std::size_t i = 0; i < kPreorderInstances; ++i) {
    const EffectTheory& th = theories[i % theories.size()];
    CostMonoid m = th.kind == EffectKind::Pure && (i / theories.size()) % 2 == 1
                       ? CostMonoid::ParWorkSpan
                       : CostMonoid::SeqNat;
    TermGenerator gen(1000 + i, th, m, opts);
    TyPtr ty = Ty::ret(gen.base_type());
    CheckOptions copts{th, m};
    TermPtr t1 = elaborate_check(Ctx{}, gen.computation(ty), ty, copts);
    TermPtr t2 = elaborate_check(Ctx{}, gen.computation(ty), ty, copts);
    EvalSettings s{th, m, EvalMode::CostCounting, dom};
    Outcome a = run(t1, ty, Env{}, {}, s);
    Outcome other = run(t2, ty, Env{}, {}, s);
    Outcome b = raise(a, rng);
    Outcome c = raise(b, rng);

    if (!leq_outcome(a, a) || !eq_outcome(a, a)) {
      return {false, "reflexivity fails on " + to_string(a)};
    }
    ++refl;
    if (!leq_outcome(a, b) || !leq_outcome(b, c)) {
      return {false, "raising costs is not monotone on " + to_string(a)};
    }
    if (!leq_outcome(a, c)) {
      return {false, "transitivity fails: " + to_string(a) + " <= " + to_string(c)};
    }
    ++trans;
    for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &a}, std::pair{&a, &other},
                               std::pair{&other, &c}}) {
      bool eq = eq_outcome(*x, *y).holds;
      bool both = leq_outcome(*x, *y).holds && leq_outcome(*y, *x).holds;
      if (eq != both) {
        return {false, "eq and leq both ways disagree on " + to_string(*x) + " vs " + to_string(*y)};
      }
      if (!eq) ++strict;
      ++iff;
    }
  }

  RunConfig ext;
  ext.mode = EvalMode::Extensional;
  ext.laws = false;
  std::size_t collapsed = 0;
  std::string failed;
  for (const auto& r : run_all(ext)) {
    if (r.name == "reference-helpers") continue;
    if (r.ok() && r.relation == "ext-equal") {
      ++collapsed;
    } else {
      failed += " " + r.name;
    }
  }
  bool pass = failed.empty() && collapsed == corpus().size();
  return {pass, fmt::format("{} reflexive, {} transitive chains, {} eq/leq pairs ({} unequal); "
                            "{}/{} specs collapse to equality{}",
                            refl, trans, iff, strict, collapsed, corpus().size(),
                            failed.empty() ? "" : "; failed:" + failed)};
}

ProbOut random_dist(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> atoms(1, 5), cost(0, 5), value(0, 1), weight(1, 6);
  int n = atoms(rng);
  std::vector<int> ws;
  int total = 0;
  for (int i = 0; i < n; ++i) total += ws.emplace_back(weight(rng));
  Outcome o;
  o.value_ty = Ty::nat();
  ProbOut p;
  for (int i = 0; i < n; ++i) {
    p.dist.push_back({Result{Cost::units(static_cast<std::uint64_t>(cost(rng))),
                             Val::nat(static_cast<std::uint64_t>(value(rng)))},
                      Rational(ws[static_cast<std::size_t>(i)], total)});
  }
  o.data = p;
  normalize(o);
  return std::get<ProbOut>(o.data);
}

// 8
Criterion oracle_agreement() {
  std::mt19937_64 rng(11);
  std::size_t agree = 0, yes = 0;
  for (std::size_t i = 0; i < kOraclePairs; ++i) {
    ProbOut lhs = random_dist(rng);
    ProbOut rhs;
    switch (i % 3) {
      case 0: rhs = random_dist(rng); break;
      case 1: {
        Outcome o{CostMonoid::SeqNat, Ty::nat(), lhs};
        rhs = std::get<ProbOut>(raise(o, rng).data);
        break;
      }
      default: {
        Outcome o{CostMonoid::SeqNat, Ty::nat(), lhs};
        o = raise(o, rng);
        auto& d = std::get<ProbOut>(o.data).dist;
        auto& w = d[rng() % d.size()].result.cost;
        if (w.work > 0) w = Cost::units(w.work - 1);
        normalize(o);
        rhs = std::get<ProbOut>(o.data);
      }
    }
    bool fast = cdf_dominance(lhs, rhs);
    bool flow = coupling_by_flow(lhs, rhs, CostMonoid::SeqNat);
    if (fast != flow) {
      Outcome l{CostMonoid::SeqNat, Ty::nat(), lhs}, r{CostMonoid::SeqNat, Ty::nat(), rhs};
      return {false, fmt::format("pair {}: cdf {} flow {} on {} vs {}", i, fast, flow, to_string(l),
                                 to_string(r))};
    }
    ++agree;
    if (fast) ++yes;
  }
  return {agree == kOraclePairs,
          fmt::format("{}/{} pairs agree ({} related, {} unrelated), 0 disagreements", agree,
                      kOraclePairs, yes, kOraclePairs - yes)};
}

// 9
Criterion sort_equality() {
  DomainConfig dom;
  dom.list_len = 5;
  dom.elems = 5;
  auto t0 = Clock::now();
  Verdict v = ext_equal_program(library_program("isort"), library_program("msort"), dom);
  double secs = seconds_since(t0);
  std::size_t lists = enumerate(*Ty::list(Ty::nat()), dom).size();
  bool pass = v.holds && secs <= kSortEqualSeconds;
  std::string detail = fmt::format("isort = msort extensionally on {} lists, {:.2f}s (limit {:.0f}s)",
                                   lists, secs, kSortEqualSeconds);
  if (!v.holds) detail += "; " + v.witness->explanation;
  return {pass, detail};
}

// 10
Criterion parallel_law() {
  TyPtr ty = Ty::ret(Ty::prod(Ty::nat(), Ty::boolean()));
  CheckOptions opts{EffectTheory::pure(), CostMonoid::ParWorkSpan};
  EvalSettings s{EffectTheory::pure(), CostMonoid::ParWorkSpan, EvalMode::CostCounting, {}};
  std::vector<Cost> costs;
  for (std::uint64_t w = 0; w <= 8; ++w) {
    for (std::uint64_t sp = 0; sp <= 8; ++sp) costs.push_back(Cost::of(w, sp));
  }
  std::size_t instances = 0;
  for (Cost c1 : costs) {
    for (Cost c2 : costs) {
      Cost both = Cost::of(c1.work + c2.work, std::max(c1.span, c2.span));
      ParamMap params{{"c1", c1}, {"c2", c2}, {"c", both}};
      TermPtr lhs = elaborate_check(
          Ctx{}, parse_term("(par (step c1 (ret 4)) (step c2 (ret true)))", params), ty, opts);
      TermPtr rhs =
          elaborate_check(Ctx{}, parse_term("(step c (ret (pair 4 true)))", params), ty, opts);
      Outcome l = run(lhs, ty, Env{}, {}, s);
      Outcome r = run(rhs, ty, Env{}, {}, s);
      Result expect{both, Val::pair(Val::nat(4), Val::boolean(true))};
      if (!eq_outcome(l, r) || pure_result(l) != expect) {
        return {false, fmt::format("c1 = {}, c2 = {}: {} vs {}", to_string(CostMonoid::ParWorkSpan, c1),
                                   to_string(CostMonoid::ParWorkSpan, c2), to_string(l),
                                   to_string(r))};
      }
      ++instances;
    }
  }
  return {true, fmt::format("{} instances with work, span <= 8", instances)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
      {"corpus conformance", corpus_conformance},
      {"double closed form", double_closed_form},
      {"isort exact worst case", isort_worst_case},
      {"sublist/binomial", sublist_binomial},
      {"pervasive nondeterminism", pervasive_nondet},
      {"law suite", law_suite},
      {"preorder properties", preorder_properties},
      {"oracle agreement", oracle_agreement},
      {"isort/msort extensional equality", sort_equality},
      {"parallel monoid", parallel_law},
  };
  int failures = 0;
  with_stack([&] {
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      Criterion o;
      try {
        o = criteria[i].second();
      } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
      }
      if (!o.pass) ++failures;
      std::cout << fmt::format("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                               o.detail)
                << std::flush;
    }
  });
  std::cout << fmt::format("{}/{} criteria pass\n", criteria.size() - static_cast<std::size_t>(failures),
                           criteria.size());
  return failures == 0 ? 0 : 1;
}
