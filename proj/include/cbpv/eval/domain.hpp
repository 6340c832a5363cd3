#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cbpv/eval/value.hpp"

namespace cbpv {

/// Bounds for enumerating inputs and states.
///
/// Naturals range over 0..nat_max. Lists have length at most list_len; a
/// list of naturals draws its elements from 0..elems-1, any other element
/// type from its own enumeration. Initial states of type nat range over
/// 0..state_max.
struct DomainConfig {
  std::uint64_t nat_max = 16;
  std::size_t list_len = 5;
  std::uint64_t elems = 5;
  std::uint64_t state_max = 8;
  /// Largest enumeration (per type, and per tuple of arguments) allowed.
  std::size_t max_domain = 1'000'000;
  /// Reject final states outside the enumerated state domain.
  bool strict_states = false;

  friend bool operator==(const DomainConfig&, const DomainConfig&) = default;
};

/// Values of a first-order type in canonical order: naturals ascending,
/// lists by length then lexicographically, products lexicographically, sums
/// left before right. Throws EvalError (DomainTooLarge) past the cap or for
/// thunk types.
std::vector<Val> enumerate(const Ty& t, const DomainConfig& cfg);

/// Initial states for the state theory.
std::vector<Val> state_domain(const Ty& t, const DomainConfig& cfg);

/// Cartesian product of argument domains, first argument varying slowest.
std::vector<std::vector<Val>> enumerate_args(const std::vector<TyPtr>& tys,
                                             const DomainConfig& cfg);

/// "nat<=16 list<=5 elems=5 state<=8".
std::string describe(const DomainConfig& cfg);

}  // namespace cbpv
