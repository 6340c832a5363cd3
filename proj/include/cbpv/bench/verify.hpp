#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbpv/bench/corpus.hpp"
#include "cbpv/eval/eval.hpp"
#include "cbpv/laws/law.hpp"

namespace cbpv {

enum class Status { Holds, Fails, Inconclusive, Error };

std::string_view name(Status s);

struct Counterexample {
  std::string input;
  std::string lhs;
  std::string rhs;
  std::string explanation;
};

/// Outcome of checking one bound, law, or harness property.
struct CheckReport {
  std::string name;
  std::string relation;
  Status status = Status::Error;
  std::string domain;
  CostMonoid monoid = CostMonoid::SeqNat;
  /// Extremes of the program's cost over the inputs examined.
  std::optional<Cost> max_cost;
  std::optional<Cost> min_cost;
  std::optional<Counterexample> counterexample;
  double millis = 0;
  std::size_t inputs = 0;
  /// Hypothesis specs: candidates drawn and witnesses admitted.
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> witnesses;
  /// The verdict depends on the finite domain used for closures.
  bool domain_relative = false;

  bool ok() const { return status == Status::Holds; }
};

nlohmann::json to_json(const CheckReport& r);

struct RunConfig {
  EvalMode mode = EvalMode::CostCounting;
  DomainConfig domain{};
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  /// Restrict to one spec or law by name.
  std::optional<std::string> only;
  /// A corpus mutant or a law mutation fixture.
  std::optional<std::string> mutate;
  bool laws = true;
};

/// Checks one spec. In extensional mode every relation is checked as
/// equality with costs erased.
CheckReport verify(const BoundSpec& spec, const RunConfig& cfg);

CheckReport verify_law(const Law& law, const RunConfig& cfg);

/// Requires every reference helper to cost the monoid zero on the domain.
CheckReport verify_helpers_cost_free(const RunConfig& cfg);

/// The corpus, the helper check, and the law catalog (or the selection or
/// mutation named in `cfg`).
std::vector<CheckReport> run_all(const RunConfig& cfg);

/// One line per report, then a summary line.
std::string format_reports(const std::vector<CheckReport>& reports);

}  // namespace cbpv
