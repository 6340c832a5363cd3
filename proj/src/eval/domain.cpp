#include "cbpv/eval/domain.hpp"

#include <fmt/format.h>

#include "cbpv/eval/eval.hpp"
#include "cbpv/lang/printer.hpp"

namespace cbpv {

namespace {

void cap(std::size_t n, const DomainConfig& cfg, const std::string& what) {
  if (n > cfg.max_domain) {
    throw EvalError(EvalError::Kind::DomainTooLarge,
                    fmt::format("domain of {} exceeds the cap of {} values", what,
                                cfg.max_domain));
  }
}

std::vector<Val> naturals(std::uint64_t count) {
  std::vector<Val> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(Val::nat(i));
  return out;
}

std::vector<Val> lists_over(const std::vector<Val>& elems, const DomainConfig& cfg,
                            const std::string& what) {
  std::vector<Val> out{Val::nil()};
  std::vector<Val> layer{Val::nil()};
  for (std::size_t len = 1; len <= cfg.list_len; ++len) {
    cap(out.size() + layer.size() * elems.size(), cfg, what);
    // Lexicographic within a length: the head varies slowest.
    std::vector<Val> next;
    next.reserve(layer.size() * elems.size());
    for (const auto& e : elems) {
      for (const auto& tail : layer) next.push_back(Val::cons(e, tail));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Val> enumerate(const Ty& t, const DomainConfig& cfg) {
  switch (t.kind()) {
    case TyKind::Unit: return {Val::unit()};
    case TyKind::Bool: return {Val::boolean(false), Val::boolean(true)};
    case TyKind::Nat:
      cap(cfg.nat_max + 1, cfg, "nat");
      return naturals(cfg.nat_max + 1);
    case TyKind::Prod: {
      auto as = enumerate(*t.left(), cfg);
      auto bs = enumerate(*t.right(), cfg);
      cap(as.size() * bs.size(), cfg, print_type(t));
      std::vector<Val> out;
      for (const auto& a : as) {
        for (const auto& b : bs) out.push_back(Val::pair(a, b));
      }
      return out;
    }
    case TyKind::Sum: {
      std::vector<Val> out;
      for (const auto& a : enumerate(*t.left(), cfg)) out.push_back(Val::inl(a));
      for (const auto& b : enumerate(*t.right(), cfg)) out.push_back(Val::inr(b));
      cap(out.size(), cfg, print_type(t));
      return out;
    }
    case TyKind::List: {
      std::vector<Val> elems = t.elem()->kind() == TyKind::Nat ? naturals(cfg.elems)
                                                               : enumerate(*t.elem(), cfg);
      return lists_over(elems, cfg, print_type(t));
    }
    case TyKind::U:
    case TyKind::F:
    case TyKind::Arrow:
      break;
  }
  throw EvalError(EvalError::Kind::DomainTooLarge,
                  "cannot enumerate values of type " + print_type(t));
}

std::vector<Val> state_domain(const Ty& t, const DomainConfig& cfg) {
  if (t.kind() == TyKind::Nat) return naturals(cfg.state_max + 1);
  return enumerate(t, cfg);
}

std::vector<std::vector<Val>> enumerate_args(const std::vector<TyPtr>& tys,
                                             const DomainConfig& cfg) {
  std::vector<std::vector<Val>> out{{}};
  for (const auto& ty : tys) {
    auto vals = enumerate(*ty, cfg);
    cap(out.size() * vals.size(), cfg, "the argument tuple");
    std::vector<std::vector<Val>> next;
    next.reserve(out.size() * vals.size());
    for (const auto& prefix : out) {
      for (const auto& v : vals) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string describe(const DomainConfig& cfg) {
  return fmt::format("nat<={} list<={} elems={} state<={}", cfg.nat_max, cfg.list_len,
                     cfg.elems, cfg.state_max);
}

}  // namespace cbpv
