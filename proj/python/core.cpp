// Python bindings: the checker and evaluator behind the cbpvcost package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbpv/bench/verify.hpp"
#include "cbpv/eval/stack.hpp"
#include "cbpv/lang/parser.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/types/check.hpp"

namespace py = pybind11;
using namespace cbpv;

namespace {

EvalMode parse_mode(const std::string& mode) {
  if (mode == "cost") return EvalMode::CostCounting;
  if (mode == "ext") return EvalMode::Extensional;
  throw py::value_error("mode must be 'cost' or 'ext', got '" + mode + "'");
}

DomainConfig domain(std::uint64_t nat_max, std::size_t list_len, std::uint64_t elems,
                    std::uint64_t state_max) {
  DomainConfig d;
  d.nat_max = nat_max;
  d.list_len = list_len;
  d.elems = elems;
  d.state_max = state_max;
  return d;
}

// Runs on a large stack with the GIL released; exceptions cross back intact.
template <class T, class F>
T on_eval_stack(F&& fn) {
  T out{};
  py::gil_scoped_release release;
  with_stack([&] { out = fn(); });
  return out;
}

std::string run_check(std::optional<std::string> spec, const std::string& mode, std::uint64_t nat_max,
                  std::size_t list_len, std::uint64_t elems, std::uint64_t state_max,
                  std::uint64_t seed, std::size_t trials, std::optional<std::string> mutate,
                  bool laws) {
  RunConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.domain = domain(nat_max, list_len, elems, state_max);
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.only = std::move(spec);
  cfg.mutate = std::move(mutate);
  cfg.laws = laws;
  return on_eval_stack<std::string>([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : run_all(cfg)) arr.push_back(to_json(r));
    return arr.dump();
  });
}

// Each row is (arguments, outcome), rendered as text.
std::vector<std::pair<std::vector<std::string>, std::string>> run_evaluate(
    const std::string& source, std::optional<std::vector<std::string>> args,
    const std::string& mode, std::uint64_t nat_max, std::size_t list_len, std::uint64_t elems,
    std::uint64_t state_max) {
  EvalMode m = parse_mode(mode);
  DomainConfig dom = domain(nat_max, list_len, elems, state_max);
  using Rows = std::vector<std::pair<std::vector<std::string>, std::string>>;
  return on_eval_stack<Rows>([&] {
    Program p = elaborate(parse_program(source));
    EvalSettings s = settings_for(p, m, dom);
    auto [tys, fin] = uncurry(p.declared_ty);
    std::vector<std::vector<Val>> tuples;
    if (args) {
      if (args->size() != tys.size()) {
        throw std::invalid_argument(p.name + " takes " + std::to_string(tys.size()) +
                                    " argument(s)");
      }
      std::vector<Val> vals;
      for (std::size_t i = 0; i < tys.size(); ++i) vals.push_back(parse_value((*args)[i], tys[i]));
      tuples.push_back(std::move(vals));
    } else {
      tuples = enumerate_args(tys, dom);
    }
    Rows rows;
    for (const auto& tuple : tuples) {
      std::vector<std::string> shown;
      for (const auto& v : tuple) shown.push_back(to_string(v));
      rows.emplace_back(std::move(shown), to_string(run(p.body, p.declared_ty, Env{}, tuple, s)));
    }
    return rows;
  });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cost bounds and equational laws for call-by-push-value programs";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TypeError>(m, "TypeCheckError", PyExc_ValueError);

  m.def("check", &run_check, py::arg("spec") = py::none(), py::arg("mode") = "cost",
        py::arg("nat_max") = DomainConfig{}.nat_max, py::arg("list_len") = DomainConfig{}.list_len,
        py::arg("elems") = DomainConfig{}.elems, py::arg("state_max") = DomainConfig{}.state_max,
        py::arg("seed") = 1, py::arg("trials") = 500, py::arg("mutate") = py::none(),
        py::arg("laws") = true, "Run the checker; returns the JSON report array as a string.");

  m.def("evaluate", &run_evaluate, py::arg("source"), py::arg("args") = py::none(),
        py::arg("mode") = "cost", py::arg("nat_max") = DomainConfig{}.nat_max,
        py::arg("list_len") = DomainConfig{}.list_len, py::arg("elems") = DomainConfig{}.elems,
        py::arg("state_max") = DomainConfig{}.state_max,
        "Evaluate a program file's text on the given arguments, or on every domain tuple.");

  m.def("format_program", [](const std::string& source) {
    return print(elaborate(parse_program(source)));
  }, py::arg("source"), "Type-check a program and print it canonically.");

  m.def("library_source", [](const std::string& name) { return library_source(name); },
        py::arg("name"));
  m.def("library_names", &library_names);

  m.def("specs", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& s : corpus()) out.emplace_back(s.name, std::string(name(s.relation)), s.summary);
    return out;
  }, "(name, relation, summary) for each corpus spec.");

  m.def("laws", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& l : catalog()) out.emplace_back(l.name, l.lhs, l.rhs);
    return out;
  }, "(name, lhs, rhs) for each law.");

  m.def("mutations", [] {
    std::vector<std::string> out = corpus_mutants();
    for (const auto& l : mutation_fixtures()) out.push_back(l.name);
    return out;
  });
}
