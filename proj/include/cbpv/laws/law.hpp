#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cbpv/eval/eval.hpp"
#include "cbpv/lang/parser.hpp"

namespace cbpv {

/// Sort of a law metavariable. Computations and functions are bound as
/// thunks of generated closed terms; values are drawn from the domain.
enum class MetaSort {
  Comp,        // e : U X
  Producer,    // e : U (F A)
  Fun,         // f : U (A -> X)
  FunAB,       // f : U (A -> F B)
  FunB,        // g : U (B -> X)
  StateFun,    // e : U (S -> X)
  StateFun2,   // e : U (S -> S -> X)
  Value,       // a : A
  StateValue,  // s : S
};

struct MetaVar {
  std::string name;
  MetaSort sort;
};

/// An equation between two term templates.
///
/// Templates are surface syntax whose free variables are the metavariables.
/// Scalar parameters (costs in step slots, probabilities in flip slots) are
/// substituted at parse time from the map drawn by `params`; `side_condition`
/// must accept the draw, otherwise it is redrawn.
struct Law {
  std::string name;
  /// Theory the law belongs to; unset means it holds in every theory and is
  /// checked under each in turn.
  std::optional<EffectKind> theory;
  std::string lhs;
  std::string rhs;
  std::vector<MetaVar> metas;
  /// Both sides have type A -> X rather than X.
  bool function_typed = false;
  std::function<ParamMap(std::mt19937_64&, CostMonoid)> params;
  std::function<bool(const ParamMap&)> side_condition;
  std::string note;
};

/// The 25 equations: the step laws, nondeterminism, probabilistic choice,
/// global state, and the monad laws for bind.
const std::vector<Law>& catalog();

/// Deliberately wrong variants of catalog laws. A working checker must
/// find a counterexample to each.
const std::vector<Law>& mutation_fixtures();

const Law* find_law(std::string_view name);

struct LawFailure {
  std::string instance;  // metavariable terms and parameters
  std::string lhs;
  std::string rhs;
  std::string explanation;
};

struct LawReport {
  std::string law;
  std::size_t trials = 0;
  std::size_t failed = 0;
  std::vector<LawFailure> failures;  // the first few

  bool passed() const { return failed == 0; }
};

class GeneratorExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instantiates the law `trials` times and requires equal outcomes on both
/// sides. Deterministic in `seed`. Throws GeneratorExhausted when the side
/// condition rejects every draw within the budget.
LawReport check_law(const Law& law, std::size_t trials, std::uint64_t seed,
                    EvalMode mode = EvalMode::CostCounting);

/// Domain used for law instances (small, so tabulation stays cheap).
DomainConfig law_domain();

}  // namespace cbpv
