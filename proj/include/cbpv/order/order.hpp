#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbpv/eval/eval.hpp"

namespace cbpv {

struct Witness {
  std::vector<Val> input;  // empty when comparing closed outcomes
  std::string lhs;
  std::string rhs;
  std::string explanation;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;  // present iff !holds
  /// Set when closures were compared by tabulation over the configured
  /// domain, so the verdict only speaks for that domain.
  bool domain_relative = false;

  explicit operator bool() const { return holds; }

  static Verdict yes() { return {}; }
  static Verdict no(std::string lhs, std::string rhs, std::string why);
};

/// How closures found inside outcomes are compared: by evaluating both on
/// every enumerated argument tuple under these settings. Without one,
/// closures are compared by identity of code and captured environment.
struct ClosureCompare {
  EvalSettings settings;
};

class OrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (c, v) <= (c', v') iff c <= c' in the monoid and v = v'. Lifted to each
/// theory: directly for pure outcomes, Egli-Milner for finite sets (the empty
/// set relates only to itself), couplings for distributions, pointwise for
/// state tables. Throws OrderError on theory, monoid, or shape mismatch.
Verdict leq_outcome(const Outcome& lhs, const Outcome& rhs,
                    const ClosureCompare* closures = nullptr);

/// Identical after normalization (closures compared as above).
Verdict eq_outcome(const Outcome& lhs, const Outcome& rhs,
                   const ClosureCompare* closures = nullptr);

/// Whether a transport plan exists moving `lhs` mass onto `rhs` mass along
/// `related(i, j)` edges. Weights are cleared to integers over a common
/// denominator and decided by integral max-flow, so the answer is exact.
/// Unequal total masses are never feasible.
bool transportation_oracle(const std::vector<Rational>& lhs, const std::vector<Rational>& rhs,
                           const std::function<bool(std::size_t, std::size_t)>& related);

/// Coupling order for the sequential monoid with first-order values: per
/// value, equal total mass and the left cost distribution is stochastically
/// dominated by the right one.
bool cdf_dominance(const ProbOut& lhs, const ProbOut& rhs);

/// The coupling order decided by max-flow alone.
bool coupling_by_flow(const ProbOut& lhs, const ProbOut& rhs, CostMonoid m);

enum class Judgment { Leq, Eq };

struct CostRange {
  std::optional<Cost> max;  // componentwise over all results of all inputs
  std::optional<Cost> min;
  void add(Cost c);
};

struct TabulatedCheck {
  Verdict verdict;
  std::size_t inputs = 0;
  CostRange lhs_cost;
  CostRange rhs_cost;
};

/// Compares two programs of the same type and theory. Closed programs of
/// type F A are compared directly; curried first-order functions are
/// tabulated over every argument tuple of the domain, after the fixed
/// `prefix` arguments (used for generated higher-order arguments). The
/// first failing input in canonical order is reported.
TabulatedCheck check_programs(const Program& lhs, const Program& rhs, Judgment j,
                              EvalMode mode, const DomainConfig& cfg,
                              const std::vector<Val>& prefix = {});

Verdict leq_program(const Program& lhs, const Program& rhs, EvalMode mode,
                    const DomainConfig& cfg, const std::vector<Val>& prefix = {});

/// Equality of the extensional-mode tabulations.
Verdict ext_equal_program(const Program& lhs, const Program& rhs, const DomainConfig& cfg,
                          const std::vector<Val>& prefix = {});

}  // namespace cbpv
