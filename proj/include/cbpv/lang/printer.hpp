#pragma once

#include <string>

#include "cbpv/lang/syntax.hpp"

namespace cbpv {

/// Canonical rendering. Deterministic, no simplification (a zero step is
/// printed as written), rationals in lowest terms, and parse(print(p))
/// reproduces p up to alpha-renaming.
std::string print(const Program& p);
std::string print_term(const Term& t);
std::string print_type(const Ty& t);
std::string print_theory(const EffectTheory& t);

}  // namespace cbpv
