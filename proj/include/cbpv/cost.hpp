#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cbpv {

/// Which ordered cost monoid a program is instrumented with.
///
/// SeqNat is (N, +, 0, <=). ParWorkSpan pairs work and span, ordered
/// componentwise, with sequential composition adding both components and
/// parallel composition adding work and taking the max of spans.
enum class CostMonoid { SeqNat, ParWorkSpan };

std::string_view name(CostMonoid m);

/// A cost in either monoid. Sequential costs keep span == work, so the
/// sequential monoid is the diagonal of the work/span monoid and both share
/// one representation and one `+`.
struct Cost {
  std::uint64_t work = 0;
  std::uint64_t span = 0;

  static constexpr Cost zero() { return {0, 0}; }
  static constexpr Cost units(std::uint64_t n) { return {n, n}; }
  static constexpr Cost of(std::uint64_t work, std::uint64_t span) {
    return {work, span};
  }

  constexpr bool is_zero() const { return work == 0 && span == 0; }

  friend constexpr Cost operator+(Cost a, Cost b) {
    return {a.work + b.work, a.span + b.span};
  }
  Cost& operator+=(Cost other) { return *this = *this + other; }

  friend constexpr auto operator<=>(const Cost&, const Cost&) = default;
};

/// Parallel composition: work adds, span maxes.
constexpr Cost parallel(Cost a, Cost b) {
  return {a.work + b.work, a.span > b.span ? a.span : b.span};
}

/// The monoid's intrinsic order.
constexpr bool cost_leq(CostMonoid m, Cost a, Cost b) {
  if (m == CostMonoid::SeqNat) return a.work <= b.work;
  return a.work <= b.work && a.span <= b.span;
}

/// Whether a literal is representable in the monoid.
constexpr bool admissible(CostMonoid m, Cost c) {
  return m == CostMonoid::ParWorkSpan || c.work == c.span;
}

/// "3" for sequential costs, "(5,3)" for work/span pairs.
std::string to_string(CostMonoid m, Cost c);

}  // namespace cbpv
