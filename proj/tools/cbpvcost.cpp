// cbpvcost: check cost bounds and equational laws, evaluate program files.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cbpv/bench/verify.hpp"
#include "cbpv/eval/stack.hpp"
#include "cbpv/lang/parser.hpp"
#include "cbpv/lang/printer.hpp"
#include "cbpv/types/check.hpp"

namespace {

using namespace cbpv;

struct DomainFlags {
  DomainConfig domain;
  std::string mode = "cost";

  void add(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "cost (cost-counting) or ext (extensional)")
        ->check(CLI::IsMember({"cost", "ext"}));
    cmd->add_option("--nat-max", domain.nat_max, "largest natural number enumerated");
    cmd->add_option("--list-len", domain.list_len, "longest list enumerated");
    cmd->add_option("--elems", domain.elems, "list elements range over 0..K-1");
    cmd->add_option("--state-max", domain.state_max, "largest initial state");
  }

  EvalMode eval_mode() const {
    return mode == "ext" ? EvalMode::Extensional : EvalMode::CostCounting;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_check(const DomainFlags& flags, const RunConfig& base, const std::string& json_path) {
  RunConfig cfg = base;
  cfg.mode = flags.eval_mode();
  cfg.domain = flags.domain;
  auto reports = run_all(cfg);
  std::cout << format_reports(reports);
  if (!json_path.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    std::ofstream out(json_path);
    out << arr.dump(2) << "\n";
  }
  bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
  return ok ? 0 : 1;
}

int cmd_eval(const DomainFlags& flags, const std::string& file,
             const std::vector<std::string>& inputs) {
  Program p = elaborate(parse_program(read_file(file)));
  EvalSettings s = settings_for(p, flags.eval_mode(), flags.domain);
  auto [args, fin] = uncurry(p.declared_ty);
  if (!inputs.empty()) {
    if (inputs.size() != args.size()) {
      throw std::runtime_error(fmt::format("{} takes {} argument(s)", p.name, args.size()));
    }
    std::vector<Val> vals;
    for (std::size_t i = 0; i < args.size(); ++i) vals.push_back(parse_value(inputs[i], args[i]));
    std::cout << to_string(run(p.body, p.declared_ty, Env{}, vals, s)) << "\n";
    return 0;
  }
  for (const auto& t : args) {
    if (!t->first_order()) {
      throw std::runtime_error("cannot tabulate over argument type " + print_type(*t));
    }
  }
  for (const auto& tuple : enumerate_args(args, flags.domain)) {
    std::string in;
    for (const auto& v : tuple) in += to_string(v) + " ";
    Outcome o = run(p.body, p.declared_ty, Env{}, tuple, s);
    std::cout << (tuple.empty() ? "" : in + "=> ") << to_string(o) << "\n";
  }
  return 0;
}

int cmd_list() {
  std::cout << "specs:\n";
  for (const auto& s : corpus()) {
    std::cout << fmt::format("  {:<18} {:<10} {}\n", s.name, name(s.relation), s.summary);
  }
  std::cout << "laws:\n";
  for (const auto& l : catalog()) {
    std::cout << fmt::format("  {:<14} {} = {}\n", l.name, l.lhs, l.rhs);
  }
  std::cout << "mutations:\n ";
  for (const auto& m : corpus_mutants()) std::cout << " " << m;
  for (const auto& l : mutation_fixtures()) std::cout << " " << l.name;
  std::cout << "\nlibrary:\n ";
  for (const auto& n : library_names()) std::cout << " " << n;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost bounds and equational laws for call-by-push-value programs"};
  app.require_subcommand(1);

  DomainFlags check_flags;
  RunConfig run_cfg;
  std::string json_path;
  std::string only, mutate;
  auto* check = app.add_subcommand("check", "verify the corpus bounds and the law catalog");
  check_flags.add(check);
  check->add_option("--spec", only, "check only this spec or law");
  check->add_option("--seed", run_cfg.seed, "seed for law trials and generated arguments");
  check->add_option("--trials", run_cfg.trials, "trials per law");
  check->add_option("--json", json_path, "write the reports as JSON");
  check->add_option("--mutate", mutate, "substitute a defective program or law");
  check->add_flag("!--no-laws", run_cfg.laws, "skip the law catalog");

  DomainFlags eval_flags;
  std::string file;
  std::vector<std::string> inputs;
  auto* eval = app.add_subcommand("eval", "evaluate a program file");
  eval_flags.add(eval);
  eval->add_option("file", file, "program file")->required();
  eval->add_option("--arg", inputs, "argument value, once per parameter; otherwise tabulate");

  auto* show = app.add_subcommand("show", "print a library program");
  std::string show_name;
  show->add_option("name", show_name)->required();

  auto* list = app.add_subcommand("list", "list specs, laws, mutations, and library programs");

  CLI11_PARSE(app, argc, argv);

  auto dispatch = [&]() -> int {
    try {
      if (*check) {
        if (!only.empty()) run_cfg.only = only;
        if (!mutate.empty()) run_cfg.mutate = mutate;
        return cmd_check(check_flags, run_cfg, json_path);
      }
      if (*eval) return cmd_eval(eval_flags, file, inputs);
      if (*show) {
        std::cout << library_source(show_name);
        return 0;
      }
      if (*list) return cmd_list();
    } catch (const TypeError& e) {
      std::cerr << "type error: " << e.what() << "\n";
      return 2;
    } catch (const ParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 0;
  };
  int status = 0;
  with_stack([&] { status = dispatch(); });
  return status;
}
