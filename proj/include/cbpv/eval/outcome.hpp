#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cbpv/cost.hpp"
#include "cbpv/eval/value.hpp"
#include "cbpv/rational.hpp"

namespace cbpv {

/// One cost-weighted result (c, v).
struct Result {
  Cost cost;
  Val value;

  friend auto operator<=>(const Result&, const Result&) = default;
  friend bool operator==(const Result&, const Result&) = default;
};

struct PureOut {
  Result result;
};

/// Finite set of results, sorted and duplicate-free. Empty means `fail`.
/// Kept as the canonical member of its Egli-Milner class: for each value,
/// only costs that are minimal or maximal among that value's costs remain.
struct NonDetOut {
  std::vector<Result> branches;
};

struct Weighted {
  Result result;
  Rational weight;
};

/// Finite distribution, sorted by result, positive weights summing to 1.
struct ProbOut {
  std::vector<Weighted> dist;
};

struct StateRow {
  Val init;
  Cost cost;
  Val final_state;
  Val value;
};

/// One row per initial state of the configured domain, in domain order.
struct StateOut {
  std::vector<StateRow> table;
};

/// Denotation of a closed computation of type F A under one effect theory.
struct Outcome {
  CostMonoid monoid = CostMonoid::SeqNat;
  TyPtr value_ty;
  std::variant<PureOut, NonDetOut, ProbOut, StateOut> data;

  EffectKind theory() const { return static_cast<EffectKind>(data.index()); }
};

/// Every (cost, value) the outcome can produce, regardless of theory.
std::vector<Result> results(const Outcome& o);

/// Sort, merge duplicates, drop zero weights.
void normalize(Outcome& o);

/// The same outcome with every cost replaced by zero, renormalized.
Outcome erase_costs(const Outcome& o);

std::string to_string(const Outcome& o);

}  // namespace cbpv
