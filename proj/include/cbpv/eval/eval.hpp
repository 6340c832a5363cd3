#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cbpv/eval/domain.hpp"
#include "cbpv/eval/outcome.hpp"
#include "cbpv/eval/value.hpp"
#include "cbpv/lang/syntax.hpp"

namespace cbpv {

enum class EvalMode { CostCounting, Extensional };

class EvalError : public std::runtime_error {
 public:
  enum class Kind {
    StateEscape,      // final state outside the configured domain
    TheoryViolation,  // effect operation outside the program's theory
    Stuck,            // dynamic sort error; precluded by type checking
    DomainTooLarge,   // enumeration past the configured cap
    Unsupported,      // e.g. par producing more than one result
    TooDeep,          // evaluation would exhaust the thread's stack
  };

  EvalError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Everything an evaluation depends on besides the term.
struct EvalSettings {
  EffectTheory theory = EffectTheory::pure();
  CostMonoid monoid = CostMonoid::SeqNat;
  EvalMode mode = EvalMode::CostCounting;
  DomainConfig domain;
};

/// Runs computation `t` of type `ty` in `env`, applied to `args`, and
/// collects the outcome. After peeling one arrow per argument `ty` must be
/// F A. The term must already be elaborated so list recursors carry their
/// per-cons charge. For the state theory the body runs once per initial
/// state.
Outcome run(const TermPtr& t, const TyPtr& ty, const Env& env,
            const std::vector<Val>& args, const EvalSettings& s);

/// Forces a thunk value of computation type `ty` applied to `args`.
Outcome force(const Val& thunk, const TyPtr& ty, const std::vector<Val>& args,
              const EvalSettings& s);

/// Evaluates a closed program of type F A. Elaborates first.
Outcome eval(const Program& p, EvalMode mode, const DomainConfig& cfg = {});

/// Evaluates a closed program of curried type A1 -> ... -> F B applied to
/// `args`. Elaborates first.
Outcome eval_applied(const Program& p, const std::vector<Val>& args, EvalMode mode,
                     const DomainConfig& cfg = {});

/// Tabulates a one-argument program over `domain`, in domain order.
std::vector<std::pair<Val, Outcome>> eval_fn(const Program& p, EvalMode mode,
                                             const DomainConfig& cfg,
                                             const std::vector<Val>& domain);

/// Argument types of a curried computation type and its final F A.
std::pair<std::vector<TyPtr>, TyPtr> uncurry(const TyPtr& comp);

EvalSettings settings_for(const Program& p, EvalMode mode, const DomainConfig& cfg);

/// A closed value term of type `ty`, e.g. "(cons 1 nil)", as a value.
Val parse_value(std::string_view text, const TyPtr& ty);

}  // namespace cbpv
