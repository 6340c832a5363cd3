#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbpv/eval/domain.hpp"
#include "cbpv/lang/syntax.hpp"

namespace cbpv {

enum class Relation { LeqUpper, LeqLower, Equal, ExtEqual };

std::string_view name(Relation r);

/// Conditional bound on a higher-order program: for every generated
/// argument e with premise(e) <= premise_bound(e), require
/// program(e) <= bound(e). Arguments are drawn for the first parameter.
struct Hypothesis {
  Program premise;
  Program premise_bound;
  /// Argument type, U X.
  TyPtr argument;
  int depth = 4;
  std::size_t candidates = 500;
  std::size_t min_witnesses = 50;
};

/// A program, its bound, and how they must relate. For LeqUpper the program
/// is below the bound; for LeqLower the bound is below the program.
struct BoundSpec {
  std::string name;
  Program program;
  Program bound;
  Relation relation = Relation::LeqUpper;
  /// Adjusts the run's domain for this spec (e.g. the sublist domain).
  std::function<DomainConfig(const DomainConfig&)> domain;
  std::optional<Hypothesis> hypothesis;
  std::string summary;
};

/// The example programs with their bounds, parsed and type-checked.
const std::vector<BoundSpec>& corpus();

const BoundSpec* find_spec(std::string_view name);

/// A named definition from the program library (`double`, `insert`,
/// `isort`, `msort`, `qsort`, `lookup`, `sublist`, `binomial`, `twice`,
/// `map`, the cost-free reference helpers, ...) as a closed program.
Program library_program(std::string_view name);
std::vector<std::string> library_names();

/// Source text of a library program, in the program file format.
std::string library_source(std::string_view name);

/// The cost-free reference helpers used on the right of bounds.
std::vector<std::string> reference_helpers();

/// Variants with a deliberate defect. `isort` drops the comparison step of
/// insertion, so the lower bound no longer holds.
std::vector<std::string> corpus_mutants();
/// The corpus with the named mutant substituted. Throws on unknown names.
std::vector<BoundSpec> mutated_corpus(std::string_view mutant);

}  // namespace cbpv
