#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cbpv/lang/syntax.hpp"

namespace cbpv {

/// Typing context: ordered (variable, value type) pairs with distinct names.
/// Extending with a name already present shadows it by dropping the older
/// entry.
class Ctx {
 public:
  Ctx() = default;
  Ctx(std::initializer_list<std::pair<std::string, TyPtr>> entries);

  /// Throws std::invalid_argument if the type is not a value type.
  Ctx extended(std::string name, TyPtr type) const;
  const TyPtr* lookup(std::string_view name) const;

  const std::vector<std::pair<std::string, TyPtr>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, TyPtr>> entries_;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(SourceLoc loc, std::string message, std::string expected = {},
            std::string found = {});

  const SourceLoc& loc() const { return loc_; }
  const std::string& message() const { return message_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceLoc loc_;
  std::string message_;
  std::string expected_;
  std::string found_;
};

/// Which effect operations and cost literals are admissible.
struct CheckOptions {
  EffectTheory theory = EffectTheory::pure();
  CostMonoid monoid = CostMonoid::SeqNat;
};

/// Bidirectional checker for the simply-typed fragment.
///
/// Effect operations (branch, fail, flip, get, set) and `step` are checked
/// against the ambient computation type and never synthesized, so `infer`
/// rejects a bare `fail`. Recursor motives are computation types.
///
/// Both entry points throw TypeError. The elaborating variants return the
/// term with every binder annotated and list recursors carrying their
/// per-cons charge.
void check(const Ctx& ctx, const TermPtr& t, const TyPtr& ty,
           const CheckOptions& opts = {});
TyPtr infer(const Ctx& ctx, const TermPtr& t, const CheckOptions& opts = {});

TermPtr elaborate_check(const Ctx& ctx, const TermPtr& t, const TyPtr& ty,
                        const CheckOptions& opts = {});
std::pair<TermPtr, TyPtr> elaborate_infer(const Ctx& ctx, const TermPtr& t,
                                          const CheckOptions& opts = {});

/// Checks a closed program against its declared type and returns it fully
/// annotated.
Program elaborate(const Program& p);

}  // namespace cbpv
