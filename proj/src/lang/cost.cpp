#include "cbpv/cost.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "cbpv/rational.hpp"

namespace cbpv {

std::string_view name(CostMonoid m) {
  return m == CostMonoid::SeqNat ? "seq" : "par";
}

std::string to_string(CostMonoid m, Cost c) {
  if (m == CostMonoid::SeqNat) return std::to_string(c.work);
  return fmt::format("({},{})", c.work, c.span);
}

std::string to_string(const Rational& r) {
  return r.str();
}

Rational parse_rational(const std::string& text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!digits(text)) throw std::invalid_argument("not a rational: " + text);
    return Rational(BigInt(text));
  }
  std::string_view num(text.data(), slash);
  std::string_view den(text.data() + slash + 1, text.size() - slash - 1);
  if (!digits(num) || !digits(den)) {
    throw std::invalid_argument("not a rational: " + text);
  }
  BigInt d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rational(BigInt(std::string(num)), d);
}

}  // namespace cbpv
