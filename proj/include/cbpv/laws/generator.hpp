#pragma once

#include <cstdint>
#include <random>

#include "cbpv/eval/domain.hpp"
#include "cbpv/rational.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

struct GenOptions {
  int max_depth = 6;
  /// Terms larger than this are regenerated.
  std::size_t max_size = 40;
  /// Largest numeral literal, and largest state written by `set`.
  std::uint64_t max_numeral = 3;
  /// Largest step literal (both components under the parallel monoid).
  std::uint64_t max_step = 4;
};

/// Seeded generator of well-typed terms for one effect theory and monoid.
///
/// Generated terms are fully annotated. Computations use the operations of
/// the theory, steps, binds, conditionals, small natural recursions, and any
/// context variables of suitable type. Value types are drawn from unit,
/// bool, nat, and lists of nat.
class TermGenerator {
 public:
  TermGenerator(std::uint64_t seed, EffectTheory theory, CostMonoid monoid,
                GenOptions opts = {});

  TermPtr computation(const TyPtr& ty, const Ctx& ctx = {});
  TermPtr computation(const TyPtr& ty, const Ctx& ctx, int depth);
  TermPtr value(const TyPtr& ty, const Ctx& ctx, int depth);

  /// unit, bool, or nat.
  TyPtr base_type();
  /// A random element of `ty` drawn from the domain's enumeration.
  Val element(const TyPtr& ty, const DomainConfig& cfg);
  /// A probability from {0, 1/4, 1/3, 1/2, 2/3, 3/4, 1}.
  Rational probability();
  /// A step literal admissible in the monoid.
  Cost cost();

  std::mt19937_64& rng() { return rng_; }
  const EffectTheory& theory() const { return theory_; }
  CostMonoid monoid() const { return monoid_; }

 private:
  TermPtr comp_rec(const TyPtr& ty, const Ctx& ctx, int depth);
  TermPtr value_rec(const TyPtr& ty, const Ctx& ctx, int depth);
  std::size_t pick(std::size_t n);
  bool coin(double p);
  std::string fresh();

  std::mt19937_64 rng_;
  EffectTheory theory_;
  CostMonoid monoid_;
  GenOptions opts_;
  std::uint64_t counter_ = 0;
};

}  // namespace cbpv
