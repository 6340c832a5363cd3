#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cbpv/lang/syntax.hpp"

namespace cbpv {

enum class ValKind : std::uint8_t { Unit, Bool, Nat, Pair, Inl, Inr, List, Thunk };

struct ValNode;
struct Thunk;

/// Runtime value. Cheap to copy; structure is shared and immutable.
///
/// Lists are persistent cons cells so the list recursor can hand out tails
/// without copying. Thunks hold a suspended computation and its environment.
class Val {
 public:
  Val() = default;  // unit

  static Val unit() { return {}; }
  static Val boolean(bool b);
  static Val nat(std::uint64_t n);
  static Val pair(Val a, Val b);
  static Val inl(Val v);
  static Val inr(Val v);
  static Val nil();
  static Val cons(Val head, Val tail);
  static Val list(const std::vector<Val>& items);
  static Val nat_list(const std::vector<std::uint64_t>& items);
  static Val thunk(std::shared_ptr<const Thunk> t);

  ValKind kind() const { return kind_; }
  bool as_bool() const { return n_ != 0; }
  std::uint64_t as_nat() const { return n_; }
  const Val& first() const;
  const Val& second() const;
  const Val& payload() const { return first(); }
  bool is_nil() const { return kind_ == ValKind::List && !node_; }
  const Val& head() const { return first(); }
  const Val& tail() const { return second(); }
  std::size_t length() const;
  std::vector<Val> items() const;
  const Thunk& thunk() const;

  /// Total order: by kind, then structurally. Thunks order by code identity
  /// and captured environment, which is finer than extensional equality.
  friend std::strong_ordering operator<=>(const Val& a, const Val& b);
  friend bool operator==(const Val& a, const Val& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  ValKind kind_ = ValKind::Unit;
  std::uint64_t n_ = 0;
  std::shared_ptr<const void> node_;
};

/// Persistent variable environment.
class Env {
 public:
  Env() = default;

  Env extended(std::string name, Val v) const;
  /// Throws std::out_of_range for an unbound name.
  const Val& lookup(std::string_view name) const;
  bool empty() const { return !head_; }

  friend std::strong_ordering operator<=>(const Env& a, const Env& b);

 private:
  struct Node;
  std::shared_ptr<const Node> head_;
};

/// A suspended computation. `Closure` runs `term` in `env`. `Recursor`
/// stands for the recursive result `ih` of a nat/list recursor: forcing it
/// re-enters the recursor node `term` at scrutinee `at`.
struct Thunk {
  enum class Kind { Closure, Recursor };
  Kind kind = Kind::Closure;
  TermPtr term;
  Env env;
  Val at;
};

/// "tt", "true", "3", "(1, 2)", "inl 0", "[0, 1]", "<thunk>".
std::string to_string(const Val& v);

}  // namespace cbpv
