#pragma once

#include <string_view>
#include <variant>

#include "cbpv/bench/corpus.hpp"
#include "cbpv/eval/eval.hpp"
#include "cbpv/lang/parser.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv::test {

inline Program program(std::string_view src) { return elaborate(parse_program(src)); }

inline const Result& pure_result(const Outcome& o) { return std::get<PureOut>(o.data).result; }
inline const NonDetOut& nondet(const Outcome& o) { return std::get<NonDetOut>(o.data); }
inline const ProbOut& prob(const Outcome& o) { return std::get<ProbOut>(o.data); }
inline const StateOut& state(const Outcome& o) { return std::get<StateOut>(o.data); }

inline Result res(std::uint64_t cost, Val v) { return {Cost::units(cost), std::move(v)}; }

/// A library program applied to arguments, cost-counting.
inline Outcome apply(std::string_view name, std::vector<Val> args, DomainConfig cfg = {}) {
  return eval_applied(library_program(name), args, EvalMode::CostCounting, cfg);
}

}  // namespace cbpv::test
