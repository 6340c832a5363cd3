#include "cbpv/bench/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "cbpv/eval/stack.hpp"
#include "cbpv/laws/generator.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/order/order.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

std::string_view name(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Inconclusive: return "inconclusive";
    case Status::Error: return "error";
  }
  return "?";
}

namespace {

nlohmann::json cost_json(CostMonoid m, const std::optional<Cost>& c) {
  if (!c) return nullptr;
  if (m == CostMonoid::SeqNat) return c->work;
  return {{"work", c->work}, {"span", c->span}};
}

std::string show_input(const std::vector<Val>& vals) {
  std::vector<std::string> parts;
  for (const auto& v : vals) parts.push_back(to_string(v));
  return fmt::format("{}", fmt::join(parts, " "));
}

Counterexample from_witness(const Witness& w, std::string prefix = {}) {
  std::string input = show_input(w.input);
  if (!prefix.empty()) input = input.empty() ? prefix : prefix + " " + input;
  return {input, w.lhs, w.rhs, w.explanation};
}

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs `body`, turning evaluation and checking errors into an Error report.
template <class F>
CheckReport guarded(CheckReport r, F&& body) {
  auto start = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::Error;
    r.counterexample = Counterexample{{}, {}, {}, e.what()};
  }
  r.millis = millis_since(start);
  return r;
}

struct Sides {
  const Program* lhs;
  const Program* rhs;
  bool program_left;
};

Sides sides(const BoundSpec& spec) {
  if (spec.relation == Relation::LeqLower) return {&spec.bound, &spec.program, false};
  return {&spec.program, &spec.bound, true};
}

void record(CheckReport& r, const TabulatedCheck& t, bool program_left) {
  r.inputs += t.inputs;
  const CostRange& c = program_left ? t.lhs_cost : t.rhs_cost;
  auto merge = [&](std::optional<Cost>& into, const std::optional<Cost>& c, bool max) {
    if (!c) return;
    if (!into) {
      into = c;
    } else if (max) {
      into = Cost::of(std::max(into->work, c->work), std::max(into->span, c->span));
    } else {
      into = Cost::of(std::min(into->work, c->work), std::min(into->span, c->span));
    }
  };
  merge(r.max_cost, c.max, true);
  merge(r.min_cost, c.min, false);
  if (t.verdict.domain_relative) r.domain_relative = true;
}

void check_plain(CheckReport& r, const BoundSpec& spec, const RunConfig& cfg,
                 const DomainConfig& dom) {
  const bool ext = cfg.mode == EvalMode::Extensional || spec.relation == Relation::ExtEqual;
  const EvalMode mode = ext ? EvalMode::Extensional : EvalMode::CostCounting;
  const Judgment j = ext || spec.relation == Relation::Equal ? Judgment::Eq : Judgment::Leq;
  auto [lhs, rhs, program_left] = sides(spec);
  TabulatedCheck t = check_programs(*lhs, *rhs, j, mode, dom);
  record(r, t, program_left);
  if (t.verdict.holds) {
    r.status = Status::Holds;
  } else {
    r.status = Status::Fails;
    r.counterexample = from_witness(*t.verdict.witness);
  }
}

void check_hypothesis(CheckReport& r, const BoundSpec& spec, const RunConfig& cfg,
                      const DomainConfig& dom) {
  const Hypothesis& h = *spec.hypothesis;
  const bool ext = cfg.mode == EvalMode::Extensional;
  const EvalMode mode = ext ? EvalMode::Extensional : EvalMode::CostCounting;
  const Judgment j = ext ? Judgment::Eq : Judgment::Leq;
  const TyPtr& arg = h.argument;
  CheckOptions copts{spec.program.theory, spec.program.monoid};

  std::seed_seq sseq{cfg.seed, std::uint64_t{0x4e7}};
  std::array<std::uint64_t, 1> words{};
  sseq.generate(words.begin(), words.end());
  GenOptions gopts;
  gopts.max_depth = h.depth;
  TermGenerator gen(words[0], spec.program.theory, spec.program.monoid, gopts);

  std::size_t admitted = 0;
  std::size_t drawn = 0;
  r.status = Status::Holds;
  for (; drawn < h.candidates; ++drawn) {
    TermPtr t = elaborate_check(Ctx{}, gen.computation(arg->inner(), Ctx{}, h.depth),
                                arg->inner(), copts);
    Val e = Val::thunk(std::make_shared<const Thunk>(Thunk{Thunk::Kind::Closure, t, Env{}, {}}));
    std::vector<Val> prefix{e};
    // The premise is always an inequality; in extensional mode it is vacuous.
    TabulatedCheck premise =
        check_programs(h.premise, h.premise_bound, Judgment::Leq, mode, dom, prefix);
    if (!premise.verdict.holds) continue;
    ++admitted;
    TabulatedCheck c = check_programs(spec.program, spec.bound, j, mode, dom, prefix);
    record(r, c, true);
    if (!c.verdict.holds) {
      r.status = Status::Fails;
      r.counterexample = from_witness(*c.verdict.witness, "e = " + print_term(*t) + ";");
      ++drawn;
      break;
    }
  }
  r.candidates = drawn;
  r.witnesses = admitted;
  if (r.status == Status::Holds && admitted < h.min_witnesses) r.status = Status::Inconclusive;
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j = {
      {"name", r.name},
      {"relation", r.relation},
      {"verdict", std::string(name(r.status))},
      {"domain", r.domain},
      {"monoid", std::string(name(r.monoid))},
      {"max_cost", cost_json(r.monoid, r.max_cost)},
      {"min_cost", cost_json(r.monoid, r.min_cost)},
      {"millis", r.millis},
      {"inputs", r.inputs},
      {"domain_relative", r.domain_relative},
  };
  if (r.counterexample) {
    j["counterexample"] = {{"input", r.counterexample->input},
                           {"lhs", r.counterexample->lhs},
                           {"rhs", r.counterexample->rhs},
                           {"explanation", r.counterexample->explanation}};
  }
  if (r.candidates) j["candidates"] = *r.candidates;
  if (r.witnesses) j["witnesses"] = *r.witnesses;
  return j;
}

CheckReport verify(const BoundSpec& spec, const RunConfig& cfg) {
  CheckReport r;
  r.name = spec.name;
  r.relation = cfg.mode == EvalMode::Extensional ? "ext-equal" : std::string(name(spec.relation));
  r.monoid = spec.program.monoid;
  const DomainConfig dom = spec.domain ? spec.domain(cfg.domain) : cfg.domain;
  r.domain = describe(dom);
  return guarded(std::move(r), [&](CheckReport& rep) {
    if (spec.hypothesis) {
      check_hypothesis(rep, spec, cfg, dom);
      rep.domain += fmt::format(", witnesses {}/{}", *rep.witnesses, *rep.candidates);
    } else {
      check_plain(rep, spec, cfg, dom);
    }
  });
}

CheckReport verify_law(const Law& law, const RunConfig& cfg) {
  CheckReport r;
  r.name = law.name;
  r.relation = "law";
  r.domain = fmt::format("{} trials, seed {}, {}", cfg.trials, cfg.seed, describe(law_domain()));
  return guarded(std::move(r), [&](CheckReport& rep) {
    LawReport lr = check_law(law, cfg.trials, cfg.seed, cfg.mode);
    rep.inputs = lr.trials;
    if (lr.passed()) {
      rep.status = Status::Holds;
    } else {
      rep.status = Status::Fails;
      const LawFailure& f = lr.failures.front();
      rep.counterexample = Counterexample{f.instance, f.lhs, f.rhs,
                                          fmt::format("{} ({} of {} trials failed)",
                                                      f.explanation, lr.failed, lr.trials)};
    }
  });
}

CheckReport verify_helpers_cost_free(const RunConfig& cfg) {
  CheckReport r;
  r.name = "reference-helpers";
  r.relation = "cost-free";
  r.domain = describe(cfg.domain);
  return guarded(std::move(r), [&](CheckReport& rep) {
    rep.status = Status::Holds;
    for (const auto& h : reference_helpers()) {
      Program p = library_program(h);
      // Two-list helpers shrink the list length until the tuple space fits.
      DomainConfig dom = cfg.domain;
      std::vector<std::vector<Val>> tuples;
      for (;;) {
        try {
          tuples = enumerate_args(uncurry(p.declared_ty).first, dom);
          break;
        } catch (const EvalError& e) {
          if (e.kind() != EvalError::Kind::DomainTooLarge || dom.list_len == 0) throw;
          --dom.list_len;
        }
      }
      if (dom.list_len != cfg.domain.list_len) {
        rep.domain += fmt::format("; {} on lists<={}", h, dom.list_len);
      }
      EvalSettings es = settings_for(p, EvalMode::CostCounting, dom);
      for (const auto& args : tuples) {
        Outcome out = run(p.body, p.declared_ty, Env{}, args, es);
        ++rep.inputs;
        for (const auto& res : results(out)) {
          if (res.cost.is_zero()) continue;
          rep.status = Status::Fails;
          rep.counterexample = Counterexample{h + " " + show_input(args), to_string(out),
                                              to_string(p.monoid, Cost::zero()),
                                              "reference helper incurred cost"};
          return;
        }
      }
    }
    rep.max_cost = rep.min_cost = Cost::zero();
  });
}

std::vector<CheckReport> run_all(const RunConfig& cfg) {
  std::vector<BoundSpec> specs = corpus();
  std::vector<Law> laws = catalog();
  bool helpers = true;

  if (cfg.mutate) {
    const std::string& m = *cfg.mutate;
    bool found = false;
    for (const auto& name : corpus_mutants()) {
      if (name == m) {
        specs = mutated_corpus(m);
        found = true;
      }
    }
    for (const auto& fixture : mutation_fixtures()) {
      if (fixture.name != m) continue;
      for (auto& l : laws) {
        if (l.name == m) l = fixture;
      }
      found = true;
    }
    if (!found) throw std::invalid_argument(fmt::format("unknown mutation '{}'", m));
  }
  if (!cfg.laws) laws.clear();
  if (cfg.only) {
    std::erase_if(specs, [&](const BoundSpec& s) { return s.name != *cfg.only; });
    std::erase_if(laws, [&](const Law& l) { return l.name != *cfg.only; });
    helpers = *cfg.only == "reference-helpers";
    if (specs.empty() && laws.empty() && !helpers) {
      throw std::invalid_argument(fmt::format("no spec or law named '{}'", *cfg.only));
    }
  }

  // Checks are independent; a pool of large-stack workers takes them in
  // order and results keep canonical order.
  std::vector<std::function<CheckReport()>> jobs;
  for (const auto& s : specs) jobs.push_back([&cfg, &s] { return verify(s, cfg); });
  if (helpers) jobs.push_back([&cfg] { return verify_helpers_cost_free(cfg); });
  for (const auto& l : laws) jobs.push_back([&cfg, &l] { return verify_law(l, cfg); });

  std::vector<CheckReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) out[i] = jobs[i]();
  };
  const std::size_t n =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back([&] { with_stack(worker); });
  for (auto& t : pool) t.join();
  return out;
}

std::string format_reports(const std::vector<CheckReport>& reports) {
  std::string out;
  std::size_t specs = 0, specs_ok = 0, laws = 0, laws_ok = 0, other = 0, other_ok = 0;
  for (const auto& r : reports) {
    std::size_t& n = r.relation == "law" ? laws : r.relation == "cost-free" ? other : specs;
    std::size_t& k = r.relation == "law" ? laws_ok : r.relation == "cost-free" ? other_ok : specs_ok;
    ++n;
    if (r.ok()) ++k;
    std::string costs;
    if (r.max_cost) {
      costs = fmt::format("  cost {}..{}", to_string(r.monoid, *r.min_cost),
                          to_string(r.monoid, *r.max_cost));
    }
    out += fmt::format("{:<13} {:<20} {:<10}{}  [{}]  {:.0f} ms\n", name(r.status), r.name,
                       r.relation, costs, r.domain, r.millis);
    if (r.counterexample) {
      const auto& c = *r.counterexample;
      if (!c.input.empty()) out += fmt::format("    input: {}\n", c.input);
      if (!c.lhs.empty()) out += fmt::format("    lhs:   {}\n", c.lhs);
      if (!c.rhs.empty()) out += fmt::format("    rhs:   {}\n", c.rhs);
      out += fmt::format("    why:   {}\n", c.explanation);
    }
  }
  std::vector<std::string> parts;
  if (specs) parts.push_back(fmt::format("{}/{} specs hold", specs_ok, specs));
  if (laws) parts.push_back(fmt::format("{}/{} laws pass", laws_ok, laws));
  out += fmt::format("{}", fmt::join(parts, ", "));
  if (other) out += other_ok == other ? ", helpers cost-free" : ", helpers NOT cost-free";
  out += "\n";
  return out;
}

}  // namespace cbpv
