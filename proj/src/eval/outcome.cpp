#include "cbpv/eval/outcome.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace cbpv {

std::vector<Result> results(const Outcome& o) {
  std::vector<Result> out;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PureOut>) {
          out.push_back(d.result);
        } else if constexpr (std::is_same_v<T, NonDetOut>) {
          out = d.branches;
        } else if constexpr (std::is_same_v<T, ProbOut>) {
          for (const auto& w : d.dist) out.push_back(w.result);
        } else {
          for (const auto& r : d.table) out.push_back({r.cost, r.value});
        }
      },
      o.data);
  return out;
}

void normalize(Outcome& o) {
  if (auto* nd = std::get_if<NonDetOut>(&o.data)) {
    auto& b = nd->branches;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    // Egli-Milner equivalent sets are identified: per value, a cost strictly
    // between two others of the same value is dropped.
    auto strictly_below = [&](const Cost& x, const Cost& y) {
      return x != y && cost_leq(o.monoid, x, y);
    };
    std::vector<Result> kept;
    for (const auto& r : b) {
      bool above = false, below = false;
      for (const auto& s : b) {
        if (s.value != r.value) continue;
        above = above || strictly_below(s.cost, r.cost);
        below = below || strictly_below(r.cost, s.cost);
      }
      if (!(above && below)) kept.push_back(r);
    }
    b = std::move(kept);
  } else if (auto* pr = std::get_if<ProbOut>(&o.data)) {
    auto& d = pr->dist;
    std::sort(d.begin(), d.end(),
              [](const Weighted& a, const Weighted& b) { return a.result < b.result; });
    std::vector<Weighted> merged;
    for (auto& w : d) {
      if (w.weight == 0) continue;
      if (!merged.empty() && merged.back().result == w.result) {
        merged.back().weight += w.weight;
      } else {
        merged.push_back(std::move(w));
      }
    }
    d = std::move(merged);
  }
}

Outcome erase_costs(const Outcome& o) {
  Outcome out = o;
  std::visit(
      [](auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PureOut>) {
          d.result.cost = Cost::zero();
        } else if constexpr (std::is_same_v<T, NonDetOut>) {
          for (auto& r : d.branches) r.cost = Cost::zero();
        } else if constexpr (std::is_same_v<T, ProbOut>) {
          for (auto& w : d.dist) w.result.cost = Cost::zero();
        } else {
          for (auto& r : d.table) r.cost = Cost::zero();
        }
      },
      out.data);
  normalize(out);
  return out;
}

std::string to_string(const Outcome& o) {
  auto res = [&](const Result& r) {
    return fmt::format("({}, {})", to_string(o.monoid, r.cost), to_string(r.value));
  };
  return std::visit(
      [&](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PureOut>) {
          return res(d.result);
        } else if constexpr (std::is_same_v<T, NonDetOut>) {
          std::vector<std::string> parts;
          for (const auto& r : d.branches) parts.push_back(res(r));
          return fmt::format("{{{}}}", fmt::join(parts, ", "));
        } else if constexpr (std::is_same_v<T, ProbOut>) {
          std::vector<std::string> parts;
          for (const auto& w : d.dist) {
            parts.push_back(fmt::format("{}: {}", res(w.result), to_string(w.weight)));
          }
          return fmt::format("{{{}}}", fmt::join(parts, ", "));
        } else {
          std::vector<std::string> parts;
          for (const auto& r : d.table) {
            parts.push_back(fmt::format("{} -> ({}, {}, {})", to_string(r.init),
                                        to_string(o.monoid, r.cost),
                                        to_string(r.final_state), to_string(r.value)));
          }
          return fmt::format("{{{}}}", fmt::join(parts, ", "));
        }
      },
      o.data);
}

}  // namespace cbpv
