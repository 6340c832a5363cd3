#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cbpv {

/// Exact rationals for probabilities and distribution weights.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders in lowest terms: "0", "1", "3/4".
std::string to_string(const Rational& r);

/// Parses "p/q" or an integer. Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

}  // namespace cbpv
