#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "cbpv/lang/syntax.hpp"

namespace cbpv {

/// Syntax error with the position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, SourceLoc loc);

  const SourceLoc& loc() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  SourceLoc loc_;
};

/// Scalar parameters substituted at parse time. A rational fills the
/// probability slot of `flip`; a cost fills the cost slot of `step`. Used by
/// the law catalog to instantiate templates such as `(flip 1-p e1 e0)`.
using ParamValue = std::variant<Rational, Cost>;
using ParamMap = std::map<std::string, ParamValue, std::less<>>;

/// Parses a whole program file:
///
///     #name double            (optional)
///     #effect pure | nondet | prob | state:<ty>
///     #cost seq | par
///     (the <ty> <term>)
///
/// Effect operations outside the declared theory are rejected here, before
/// type checking, as are `par` outside the pure theory and work/span cost
/// literals under the sequential monoid.
Program parse_program(std::string_view source);

TermPtr parse_term(std::string_view source, const ParamMap& params = {});
TyPtr parse_type(std::string_view source);

}  // namespace cbpv
