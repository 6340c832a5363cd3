#include "cbpv/lang/parser.hpp"

#include <charconv>
#include <set>
#include <vector>

#include <fmt/format.h>

namespace cbpv {

ParseError::ParseError(std::string message, SourceLoc loc)
    : std::runtime_error(fmt::format("{}:{}: {}", loc.line, loc.column, message)),
      message_(std::move(message)),
      loc_(loc) {}

namespace {

// ---------------------------------------------------------------------------
// S-expression reader

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
  SourceLoc loc;

  bool is(std::string_view s) const { return is_atom && atom == s; }
};

class Reader {
 public:
  Reader(std::string_view text, int first_line = 1)
      : text_(text), line_(first_line) {}

  Sexp read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", here());
    SourceLoc loc = here();
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", loc);
    if (c == '(') {
      advance();
      Sexp list;
      list.loc = loc;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", loc);
        if (text_[pos_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
      }
    }
    Sexp a;
    a.is_atom = true;
    a.loc = loc;
    while (pos_ < text_.size() && !delimiter(text_[pos_])) {
      a.atom.push_back(text_[pos_]);
      advance();
    }
    return a;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  SourceLoc here() const { return {line_, col_}; }

 private:
  static bool delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' ||
           c == '\n' || c == '\r';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Conversion

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "ret",  "bind", "lam",  "step",  "natrec", "listrec", "case", "split",
      "if",   "branch", "fail", "flip", "get",   "set",     "par",  "let",
      "the",  "tt",   "true", "false", "zero",  "suc",     "nil",  "cons",
      "pair", "inl",  "inr",  "cost",  "ap",    ":",       "->",   "*",
      "+",    "U",    "F",    "unit",  "bool",  "nat",     "list"};
  return k;
}

std::optional<std::uint64_t> as_number(const Sexp& s) {
  if (!s.is_atom || s.atom.empty()) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.atom.data(), s.atom.data() + s.atom.size(), v);
  if (ec != std::errc() || p != s.atom.data() + s.atom.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail_at(const Sexp& s, const std::string& msg) {
  throw ParseError(msg, s.loc);
}

void expect_arity(const Sexp& s, std::size_t n, std::string_view form) {
  if (s.items.size() != n) {
    fail_at(s, fmt::format("'{}' expects {} argument(s), got {}", form, n - 1,
                           s.items.size() - 1));
  }
}

class Converter {
 public:
  explicit Converter(const ParamMap& params) : params_(params) {}

  TyPtr type(const Sexp& s) {
    try {
      return type_inner(s);
    } catch (const std::invalid_argument& e) {
      fail_at(s, e.what());
    }
  }

  Cost cost(const Sexp& s) {
    if (auto n = as_number(s)) return Cost::units(*n);
    if (!s.is_atom && s.items.size() == 3 && s.items[0].is("cost")) {
      auto w = as_number(s.items[1]);
      auto sp = as_number(s.items[2]);
      if (w && sp) return Cost::of(*w, *sp);
    }
    fail_at(s, "expected a cost literal: N or (cost WORK SPAN)");
  }

  std::string identifier(const Sexp& s) {
    if (!s.is_atom) fail_at(s, "expected an identifier");
    if (keywords().count(s.atom) || as_number(s)) {
      fail_at(s, fmt::format("'{}' cannot be used as a variable name", s.atom));
    }
    return s.atom;
  }

  Binder binder(const Sexp& s) {
    if (s.is_atom) return {identifier(s), nullptr};
    if (s.items.size() == 3 && s.items[1].is(":")) {
      return {identifier(s.items[0]), type(s.items[2])};
    }
    fail_at(s, "expected a binder: x or (x : type)");
  }

  /// `(b1 ... bn body)` with exactly n binders.
  std::pair<std::vector<Binder>, TermPtr> scope(const Sexp& s, std::size_t n,
                                                std::string_view form) {
    if (s.is_atom || s.items.size() != n + 1) {
      fail_at(s, fmt::format("'{}' expects a scope of {} binder(s) and a body",
                             form, n));
    }
    std::vector<Binder> bs;
    for (std::size_t i = 0; i < n; ++i) bs.push_back(binder(s.items[i]));
    return {std::move(bs), term(s.items[n])};
  }

  TermPtr term(const Sexp& s) {
    if (s.is_atom) return atom(s);
    if (s.items.empty()) fail_at(s, "empty form");
    const Sexp& head = s.items[0];
    const SourceLoc loc = s.loc;
    if (head.is_atom && keywords().count(head.atom)) {
      const std::string& k = head.atom;
      if (k == "suc") {
        expect_arity(s, 2, k);
        return Term::suc(term(s.items[1]), loc);
      }
      if (k == "cons") {
        expect_arity(s, 3, k);
        return Term::cons(term(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "pair") {
        expect_arity(s, 3, k);
        return Term::pair(term(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "inl" || k == "inr") {
        expect_arity(s, 2, k);
        auto v = term(s.items[1]);
        return k == "inl" ? Term::inl(v, loc) : Term::inr(v, loc);
      }
      if (k == "ret") {
        expect_arity(s, 2, k);
        return Term::ret(term(s.items[1]), loc);
      }
      if (k == "bind") {
        expect_arity(s, 3, k);
        auto e = term(s.items[1]);
        auto [bs, body] = scope(s.items[2], 1, k);
        return Term::bind(e, bs[0], body, loc);
      }
      if (k == "let") {
        // (let (x def) body) is bind (ret def) (x body)
        expect_arity(s, 3, k);
        const Sexp& def = s.items[1];
        if (def.is_atom || def.items.size() != 2) {
          fail_at(def, "'let' expects (binder definition)");
        }
        auto x = binder(def.items[0]);
        auto d = term(def.items[1]);
        return Term::bind(Term::ret(d, def.loc), x, term(s.items[2]), loc);
      }
      if (k == "lam") {
        expect_arity(s, 3, k);
        return Term::lam(binder(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "ap") {
        expect_arity(s, 3, k);
        return Term::ap(term(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "step") {
        expect_arity(s, 3, k);
        return Term::step(step_cost(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "cost") {
        return Term::cost_lit(cost(s), loc);
      }
      if (k == "natrec") {
        expect_arity(s, 4, k);
        auto [bs, body] = scope(s.items[3], 2, k);
        return Term::natrec(term(s.items[1]), term(s.items[2]), bs[0], bs[1],
                            body, loc);
      }
      if (k == "listrec") {
        expect_arity(s, 4, k);
        auto [bs, body] = scope(s.items[3], 3, k);
        return Term::listrec(term(s.items[1]), term(s.items[2]), bs[0], bs[1],
                             bs[2], body, loc);
      }
      if (k == "case") {
        expect_arity(s, 4, k);
        auto [bl, left] = scope(s.items[2], 1, k);
        auto [br, right] = scope(s.items[3], 1, k);
        return Term::sum_case(term(s.items[1]), bl[0], left, br[0], right, loc);
      }
      if (k == "split") {
        expect_arity(s, 3, k);
        auto [bs, body] = scope(s.items[2], 2, k);
        return Term::split(term(s.items[1]), bs[0], bs[1], body, loc);
      }
      if (k == "if") {
        expect_arity(s, 4, k);
        return Term::if_(term(s.items[1]), term(s.items[2]), term(s.items[3]), loc);
      }
      if (k == "branch") {
        expect_arity(s, 3, k);
        ops_.insert("branch");
        return Term::branch(term(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "flip") {
        expect_arity(s, 4, k);
        ops_.insert("flip");
        Rational p = probability(s.items[1]);
        auto e0 = term(s.items[2]);
        auto e1 = term(s.items[3]);
        return Term::flip(p, e0, e1, loc);
      }
      if (k == "get") {
        expect_arity(s, 2, k);
        ops_.insert("get");
        auto [bs, body] = scope(s.items[1], 1, k);
        return Term::get(bs[0], body, loc);
      }
      if (k == "set") {
        expect_arity(s, 3, k);
        ops_.insert("set");
        return Term::set(term(s.items[1]), term(s.items[2]), loc);
      }
      if (k == "par") {
        expect_arity(s, 3, k);
        ops_.insert("par");
        return Term::par(term(s.items[1]), term(s.items[2]), loc);
      }
      fail_at(head, fmt::format("'{}' cannot start a term", k));
    }
    // Application: (f a1 ... an), left nested.
    if (s.items.size() < 2) fail_at(s, "application needs an argument");
    TermPtr fn = term(head);
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      fn = Term::ap(fn, term(s.items[i]), s.items[i].loc);
    }
    return fn;
  }

  const std::set<std::string>& ops() const { return ops_; }
  bool saw_workspan_literal() const { return workspan_literal_; }

 private:
  TyPtr type_inner(const Sexp& s) {
    if (s.is_atom) {
      if (s.atom == "unit") return Ty::unit();
      if (s.atom == "bool") return Ty::boolean();
      if (s.atom == "nat") return Ty::nat();
      fail_at(s, fmt::format("unknown type '{}'", s.atom));
    }
    if (s.items.empty() || !s.items[0].is_atom) fail_at(s, "malformed type");
    const std::string& k = s.items[0].atom;
    if (k == "*" || k == "+") {
      expect_arity(s, 3, k);
      auto a = type_inner(s.items[1]);
      auto b = type_inner(s.items[2]);
      return k == "*" ? Ty::prod(a, b) : Ty::sum(a, b);
    }
    if (k == "list") {
      if (s.items.size() == 2) return Ty::list(type_inner(s.items[1]));
      expect_arity(s, 3, k);
      Cost c = cost(s.items[1]);
      if (c.work != c.span) workspan_literal_ = true;
      return Ty::list(type_inner(s.items[2]), c);
    }
    if (k == "U") {
      expect_arity(s, 2, k);
      return Ty::thunk(type_inner(s.items[1]));
    }
    if (k == "F") {
      expect_arity(s, 2, k);
      return Ty::ret(type_inner(s.items[1]));
    }
    if (k == "->") {
      if (s.items.size() < 3) fail_at(s, "'->' needs a domain and a codomain");
      TyPtr t = type_inner(s.items.back());
      for (std::size_t i = s.items.size() - 1; i-- > 1;) {
        t = Ty::arrow(type_inner(s.items[i]), t);
      }
      return t;
    }
    fail_at(s, fmt::format("unknown type former '{}'", k));
  }

  TermPtr atom(const Sexp& s) {
    const SourceLoc loc = s.loc;
    if (auto n = as_number(s)) return Term::numeral(*n, loc);
    if (s.atom == "tt") return Term::triv(loc);
    if (s.atom == "true") return Term::boolean(true, loc);
    if (s.atom == "false") return Term::boolean(false, loc);
    if (s.atom == "zero") return Term::zero(loc);
    if (s.atom == "nil") return Term::nil(loc);
    if (s.atom == "fail") {
      ops_.insert("fail");
      return Term::fail(loc);
    }
    return Term::var(identifier(s), loc);
  }

  TermPtr step_cost(const Sexp& s) {
    if (s.is_atom) {
      if (auto it = params_.find(s.atom); it != params_.end()) {
        if (auto* c = std::get_if<Cost>(&it->second)) {
          return Term::cost_lit(*c, s.loc);
        }
        fail_at(s, fmt::format("parameter '{}' is not a cost", s.atom));
      }
      if (auto n = as_number(s)) return Term::cost_lit(Cost::units(*n), s.loc);
      return term(s);
    }
    if (!s.items.empty() && s.items[0].is("cost")) {
      Cost c = cost(s);
      if (c.work != c.span) workspan_literal_ = true;
      return Term::cost_lit(c, s.loc);
    }
    return term(s);
  }

  Rational probability(const Sexp& s) {
    if (!s.is_atom) fail_at(s, "expected a probability p/q");
    if (auto it = params_.find(s.atom); it != params_.end()) {
      if (auto* r = std::get_if<Rational>(&it->second)) return *r;
      fail_at(s, fmt::format("parameter '{}' is not a probability", s.atom));
    }
    Rational p;
    try {
      p = parse_rational(s.atom);
    } catch (const std::invalid_argument&) {
      fail_at(s, fmt::format("expected a probability p/q, got '{}'", s.atom));
    }
    if (p < 0 || p > 1) fail_at(s, "flip probability must lie in [0,1]");
    return p;
  }

  const ParamMap& params_;
  std::set<std::string> ops_;
  bool workspan_literal_ = false;
};

EffectTheory parse_effect(const std::string& text, SourceLoc loc) {
  if (text == "pure") return EffectTheory::pure();
  if (text == "nondet") return EffectTheory::nondet();
  if (text == "prob") return EffectTheory::prob();
  if (text.rfind("state:", 0) == 0) {
    Reader r(text.substr(6), loc.line);
    Sexp s = r.read();
    ParamMap none;
    Converter c(none);
    TyPtr t = c.type(s);
    if (!t->first_order()) throw ParseError("state type must be first-order", loc);
    return EffectTheory::state_of(t);
  }
  throw ParseError(fmt::format("unknown effect theory '{}'", text), loc);
}

void check_ops(const std::set<std::string>& ops, const EffectTheory& theory,
               SourceLoc loc) {
  for (const auto& op : ops) {
    bool ok = false;
    switch (theory.kind) {
      case EffectKind::Pure: ok = op == "par"; break;
      case EffectKind::NonDet: ok = op == "branch" || op == "fail"; break;
      case EffectKind::Prob: ok = op == "flip"; break;
      case EffectKind::State: ok = op == "get" || op == "set"; break;
    }
    if (!ok) {
      throw ParseError(fmt::format("effect operation '{}' is not part of the "
                                   "declared effect theory",
                                   op),
                       loc);
    }
  }
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Program parse_program(std::string_view source) {
  Program p;
  p.theory = EffectTheory::pure();
  p.monoid = CostMonoid::SeqNat;

  // Header lines come first; the body starts at the first line that is not
  // blank, a comment, or a header.
  std::size_t pos = 0;
  int line = 1;
  while (pos < source.size()) {
    auto eol = source.find('\n', pos);
    if (eol == std::string_view::npos) eol = source.size();
    std::string text = trim(source.substr(pos, eol - pos));
    if (!text.empty() && text[0] == '#') {
      SourceLoc loc{line, 1};
      auto space = text.find_first_of(" \t");
      std::string key = text.substr(1, space == std::string::npos ? std::string::npos
                                                                  : space - 1);
      std::string value =
          space == std::string::npos ? std::string() : trim(text.substr(space));
      if (key == "name") {
        p.name = value;
      } else if (key == "effect") {
        p.theory = parse_effect(value, loc);
      } else if (key == "cost") {
        if (value == "seq") {
          p.monoid = CostMonoid::SeqNat;
        } else if (value == "par") {
          p.monoid = CostMonoid::ParWorkSpan;
        } else {
          throw ParseError(fmt::format("unknown cost monoid '{}'", value), loc);
        }
      } else {
        throw ParseError(fmt::format("unknown header '#{}'", key), loc);
      }
    } else if (!text.empty() && text[0] != ';') {
      break;
    }
    pos = eol + 1;
    ++line;
  }
  if (pos >= source.size()) throw ParseError("missing program body", {line, 1});

  Reader reader(source.substr(pos), line);
  Sexp top = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input after program", reader.here());
  if (top.is_atom || top.items.size() != 3 || !top.items[0].is("the")) {
    throw ParseError("program body must be (the TYPE TERM)", top.loc);
  }
  ParamMap none;
  Converter conv(none);
  p.declared_ty = conv.type(top.items[1]);
  p.body = conv.term(top.items[2]);
  check_ops(conv.ops(), p.theory, top.loc);
  if (conv.ops().count("par") && p.monoid != CostMonoid::ParWorkSpan) {
    throw ParseError("'par' requires the parallel cost monoid (#cost par)", top.loc);
  }
  if (conv.saw_workspan_literal() && p.monoid != CostMonoid::ParWorkSpan) {
    throw ParseError("work/span cost literal under the sequential monoid", top.loc);
  }
  return p;
}

TermPtr parse_term(std::string_view source, const ParamMap& params) {
  Reader reader(source);
  Sexp s = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input after term", reader.here());
  Converter conv(params);
  return conv.term(s);
}

TyPtr parse_type(std::string_view source) {
  Reader reader(source);
  Sexp s = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input after type", reader.here());
  ParamMap none;
  Converter conv(none);
  return conv.type(s);
}

}  // namespace cbpv
