#include "cbpv/bench/corpus.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "cbpv/lang/parser.hpp"
#include "cbpv/types/check.hpp"

namespace cbpv {

std::string_view name(Relation r) {
  switch (r) {
    case Relation::LeqUpper: return "leq-upper";
    case Relation::LeqLower: return "leq-lower";
    case Relation::Equal: return "equal";
    case Relation::ExtEqual: return "ext-equal";
  }
  return "?";
}

namespace {

struct Def {
  std::string name;
  std::string effect;  // header value
  std::string type;
  std::string body;
  std::vector<std::string> deps;
  bool reference = false;  // cost-free helper used in bounds
};

// Definitions in dependency order. Reference helpers carry no steps.
const std::vector<Def>& defs() {
  static const std::vector<Def> all = {
      // Cost-free arithmetic and list helpers.
      {"leq", "pure", "(-> nat nat (F bool))",
       "(lam a (natrec a (lam b (ret true))"
       " (k ih (lam b (natrec b (ret false) (j jh (ih j)))))))",
       {}, true},
      {"lt", "pure", "(-> nat nat (F bool))", "(lam a (lam b (leq (suc a) b)))", {"leq"}, true},
      {"add", "pure", "(-> nat nat (F nat))",
       "(lam a (lam b (natrec a (ret b) (k ih (bind ih (r (ret (suc r))))))))", {}, true},
      {"mul", "pure", "(-> nat nat (F nat))",
       "(lam a (lam b (natrec a (ret zero) (k ih (bind ih (r (add b r)))))))", {"add"}, true},
      {"pred", "pure", "(-> nat (F nat))", "(lam n (natrec n (ret zero) (k ih (ret k))))", {},
       true},
      {"len", "pure", "(-> (list nat) (F nat))",
       "(lam l (listrec l (ret zero) (x xs ih (bind ih (r (ret (suc r)))))))", {}, true},
      {"pow2", "pure", "(-> nat (F nat))",
       "(lam k (natrec k (ret 1) (j ih (bind ih (r (add r r))))))", {"add"}, true},
      // Least k with n <= 2^k, searching upwards from 0 with fuel n.
      {"clg", "pure", "(-> nat (F nat))",
       "(lam n (ap (natrec n (lam (k : nat) (ret k))"
       " (f ih (lam k (bind (pow2 k) (p (bind (leq n p)"
       " (ok (if ok (ret k) (ih (suc k))))))))))"
       " zero))",
       {"pow2", "leq"}, true},
      {"insert_spec", "pure", "(-> nat (list nat) (F (list nat)))",
       "(lam x (lam l (listrec l (ret (cons x nil))"
       " (y ys ih (bind (leq x y) (b (if b (ret (cons x (cons y ys)))"
       " (bind ih (r (ret (cons y r)))))))))))",
       {"leq"}, true},
      {"sort_spec", "pure", "(-> (list nat) (F (list nat)))",
       "(lam l (listrec l (ret nil) (x xs ih (bind ih (r (insert_spec x r))))))",
       {"insert_spec"}, true},
      // Element at an index, 0 when out of range.
      {"lookup_spec", "pure", "(-> (list nat) nat (F nat))",
       "(lam l (listrec l (lam (i : nat) (ret zero))"
       " (x xs ih (lam i (natrec i (ret x) (j jh (ih j)))))))",
       {}, true},
      {"halves", "pure", "(-> (list nat) (F (* (list nat) (list nat))))",
       "(lam l (listrec l (ret (pair nil nil))"
       " (x xs ih (bind ih (p (split p (a b (ret (pair (cons x b) a)))))))))",
       {}, true},
      {"append", "pure", "(-> (list nat) (list nat) (F (list nat)))",
       "(lam a (lam b (listrec a (ret b) (x xs ih (bind ih (r (ret (cons x r))))))))", {},
       true},

      // Programs under analysis.
      {"double", "pure", "(-> nat (F nat))",
       "(lam n (natrec n (ret zero) (k ih (step 1 (bind ih (r (ret (suc (suc r)))))))))", {}},
      {"insert", "pure", "(-> nat (list nat) (F (list nat)))",
       "(lam x (lam l (listrec l (ret (cons x nil))"
       " (y ys ih (bind (step 1 (leq x y)) (b (if b (ret (cons x (cons y ys)))"
       " (bind ih (r (ret (cons y r)))))))))))",
       {"leq"}},
      {"isort", "pure", "(-> (list nat) (F (list nat)))",
       "(lam l (listrec l (ret nil) (x xs ih (bind ih (r (insert x r))))))", {"insert"}},
      {"merge", "pure", "(-> (list nat) (list nat) (F (list nat)))",
       "(lam l1 (listrec l1 (lam l2 (ret l2))"
       " (x xs ih (lam l2 (listrec l2 (ret (cons x xs))"
       " (y ys jh (bind (step 1 (leq x y)) (b (if b (bind (ih (cons y ys)) (r (ret (cons x r))))"
       " (bind jh (r (ret (cons y r)))))))))))))",
       {"leq"}},
      // Recursion on halves, with fuel |l|.
      {"msort", "pure", "(-> (list nat) (F (list nat)))",
       "(lam l (bind (len l) (n (ap (natrec n (lam (m : (list nat)) (ret m))"
       " (f ih (lam m (bind (len m) (k (bind (leq k 1) (small (if small (ret m)"
       " (bind (halves m) (p (split p (a b (bind (ih a) (sa (bind (ih b)"
       " (sb (merge sa sb)))))))))))))))))"
       " l))))",
       {"len", "leq", "halves", "merge"}},
      // Removes some element of a non-empty list, chosen nondeterministically.
      {"choose", "nondet", "(-> (list nat) (F (* nat (list nat))))",
       "(lam l (listrec l fail (x xs ih (branch"
       " (bind ih (p (split p (pv r (ret (pair pv (cons x r)))))))"
       " (ret (pair x xs))))))",
       {}},
      {"partition", "pure", "(-> nat (list nat) (F (* (list nat) (list nat))))",
       "(lam pv (lam l (listrec l (ret (pair nil nil))"
       " (x xs ih (bind ih (p (split p (a b (bind (step 1 (leq x pv))"
       " (c (if c (ret (pair (cons x a) b)) (ret (pair a (cons x b))))))))))))))",
       {"leq"}},
      {"qsort", "nondet", "(-> (list nat) (F (list nat)))",
       "(lam (l : (list nat)) (bind (len l) (n (ap (natrec n (lam (m : (list nat)) (ret m))"
       " (f ih (lam m (listrec m (ret nil) (y ys yh (bind (choose m)"
       " (p (split p (pv rest (bind (partition pv rest) (q (split q (l1 l2"
       " (bind (ih l1) (s1 (bind (ih l2) (s2 (append s1 (cons pv s2)))))))))))))))))))"
       " l))))",
       {"len", "choose", "partition", "append"}},
      {"lookup", "nondet", "(-> (list nat) nat (F nat))",
       "(lam l (listrec l (lam (i : nat) fail)"
       " (x xs ih (lam i (natrec i (ret x) (j jh (step 1 (ih j))))))))",
       {}},
      {"bernoulli", "prob", "(F unit)", "(flip 1/2 (ret tt) (step 1 (ret tt)))", {}},
      {"binomial", "prob", "(-> nat (F unit))",
       "(lam n (natrec n (ret tt) (k ih (bind bernoulli (u ih)))))", {"bernoulli"}},
      {"sublist", "prob", "(-> (list nat) (F (list nat)))",
       "(lam l (listrec l (ret nil)"
       " (x xs ih (bind ih (r (flip 1/2 (ret r) (step 1 (ret (cons x r)))))))))",
       {}},
      {"twice", "pure", "(-> (U (F nat)) (F nat))",
       "(lam (e : (U (F nat))) (bind e (x1 (bind e (x2 (add x1 x2))))))", {"add"}},
      {"map", "pure", "(-> (U (-> nat (F nat))) (list nat) (F (list nat)))",
       "(lam (f : (U (-> nat (F nat)))) (lam l (listrec l (ret nil)"
       " (x xs ih (bind ih (ys (bind (f x) (y (ret (cons y ys))))))))))",
       {}},
  };
  return all;
}

using Table = std::vector<Def>;

const Def& def(const Table& table, std::string_view n) {
  for (const auto& d : table) {
    if (d.name == n) return d;
  }
  throw std::invalid_argument(fmt::format("unknown library definition '{}'", n));
}

// Wraps `body` in let-bindings for the dependency closure of `names`.
std::string with_helpers(const Table& table, const std::vector<std::string>& names,
                         const std::string& body) {
  std::set<std::string> need;
  std::vector<std::string> todo(names.begin(), names.end());
  while (!todo.empty()) {
    std::string n = todo.back();
    todo.pop_back();
    if (!need.insert(n).second) continue;
    for (const auto& d : def(table, n).deps) todo.push_back(d);
  }
  std::string out = body;
  for (auto it = table.rbegin(); it != table.rend(); ++it) {
    if (!need.count(it->name)) continue;
    out = fmt::format("(let (({} : (U {})) {})\n  {})", it->name, it->type, it->body, out);
  }
  return out;
}

std::string program_text(const std::string& name, const std::string& effect,
                         const std::string& type, const std::string& term) {
  return fmt::format("#name {}\n#effect {}\n#cost seq\n(the {}\n  {})\n", name, effect, type,
                     term);
}

Program make(const Table& table, const std::string& name, const std::string& effect, const std::string& type,
             const std::vector<std::string>& helpers, const std::string& body) {
  try {
    return elaborate(
        parse_program(program_text(name, effect, type, with_helpers(table, helpers, body))));
  } catch (const std::exception& e) {
    throw std::logic_error(fmt::format("corpus program '{}': {}", name, e.what()));
  }
}

DomainConfig hypothesis_domain(const DomainConfig& base) {
  DomainConfig d = base;
  d.nat_max = 2;
  d.list_len = 3;
  d.elems = 3;
  return d;
}

DomainConfig sublist_domain(const DomainConfig& base) {
  DomainConfig d = base;
  d.list_len = 8;
  d.elems = 2;
  return d;
}

std::vector<BoundSpec> build(const Table& table) {
  auto make = [&](const std::string& name, const std::string& effect, const std::string& type,
                  const std::vector<std::string>& helpers, const std::string& body) {
    return cbpv::make(table, name, effect, type, helpers, body);
  };
  std::vector<BoundSpec> out;
  auto add = [&](BoundSpec s) { out.push_back(std::move(s)); };
  const std::string lnat = "(list nat)";

  add({"double-equal",
       make("double", "pure", "(-> nat (F nat))", {"double"}, "double"),
       make("double-bound", "pure", "(-> nat (F nat))", {"add"},
            "(lam n (bind (add n n) (m (step n (ret m)))))"),
       Relation::Equal, nullptr, std::nullopt, "double n = step^n (ret (2n))"});

  add({"insert-upper",
       make("insert", "pure", "(-> nat (list nat) (F (list nat)))", {"insert"}, "insert"),
       make("insert-bound", "pure", "(-> nat (list nat) (F (list nat)))",
            {"len", "insert_spec"},
            "(lam x (lam l (bind (len l) (n (step n (insert_spec x l))))))"),
       Relation::LeqUpper, nullptr, std::nullopt, "insert x l <= step^|l| (insert_spec x l)"});

  add({"isort-upper",
       make("isort", "pure", "(-> (list nat) (F (list nat)))", {"isort"}, "isort"),
       make("isort-upper-bound", "pure", "(-> (list nat) (F (list nat)))",
            {"len", "mul", "sort_spec"},
            "(lam l (bind (len l) (n (bind (mul n n) (m (step m (sort_spec l)))))))"),
       Relation::LeqUpper, nullptr, std::nullopt, "isort l <= step^(|l|^2) (sort_spec l)"});

  add({"isort-lower",
       make("isort", "pure", "(-> (list nat) (F (list nat)))", {"isort"}, "isort"),
       make("isort-lower-bound", "pure", "(-> (list nat) (F (list nat)))",
            {"len", "pred", "sort_spec"},
            "(lam l (bind (len l) (n (bind (pred n) (m (step m (sort_spec l)))))))"),
       Relation::LeqLower, nullptr, std::nullopt, "step^(|l|-1) (sort_spec l) <= isort l"});

  add({"msort-upper",
       make("msort", "pure", "(-> (list nat) (F (list nat)))", {"msort"}, "msort"),
       make("msort-bound", "pure", "(-> (list nat) (F (list nat)))",
            {"len", "clg", "mul", "sort_spec"},
            "(lam l (bind (len l) (n (bind (clg n) (k (bind (mul n k)"
            " (m (step m (sort_spec l)))))))))"),
       Relation::LeqUpper, nullptr, std::nullopt,
       "msort l <= step^(|l| ceil(lg |l|)) (sort_spec l)"});

  add({"isort-msort",
       make("isort", "pure", "(-> (list nat) (F (list nat)))", {"isort"}, "isort"),
       make("msort", "pure", "(-> (list nat) (F (list nat)))", {"msort"}, "msort"),
       Relation::ExtEqual, nullptr, std::nullopt, "isort and msort agree ignoring cost"});

  add({"qsort-upper",
       make("qsort", "nondet", "(-> (list nat) (F (list nat)))", {"qsort"}, "qsort"),
       make("qsort-bound", "nondet", "(-> (list nat) (F (list nat)))",
            {"len", "mul", "sort_spec"},
            "(lam l (bind (len l) (n (bind (mul n n) (m (step m (sort_spec l)))))))"),
       Relation::LeqUpper, nullptr, std::nullopt,
       "every pivot choice: qsort l <= step^(|l|^2) (sort_spec l)"});

  add({"lookup-upper",
       make("lookup", "nondet", "(-> (list nat) nat (F nat))", {"lookup"}, "lookup"),
       make("lookup-bound", "nondet", "(-> (list nat) nat (F nat))",
            {"len", "lt", "lookup_spec"},
            "(lam l (lam i (bind (len l) (n (bind (lt i n)"
            " (b (if b (step i (lookup_spec l i)) fail)))))))"),
       Relation::LeqUpper, nullptr, std::nullopt,
       "lookup l i <= step^i (l[i]) in range, fail otherwise"});

  const std::string e = "(branch (step 3 (ret true)) (step 12 (ret false)))";
  add({"nondet-bool", make("e", "nondet", "(F bool)", {}, e),
       make("e-bound", "nondet", "(F bool)", {}, "(step 12 (branch (ret true) (ret false)))"),
       Relation::LeqUpper, nullptr, std::nullopt, "e <= step^12 (ret true | ret false)"});

  add({"nondet-unit", make("e-unit", "nondet", "(F unit)", {}, "(bind " + e + " ((x : bool) (ret tt)))"),
       make("e-unit-bound", "nondet", "(F unit)", {}, "(step 12 (ret tt))"), Relation::LeqUpper,
       nullptr, std::nullopt, "e; ret tt <= step^12 (ret tt)"});

  add({"sublist-binomial",
       make("sublist-unit", "prob", "(-> (list nat) (F unit))", {"sublist"},
            "(lam l (bind (sublist l) (r (ret tt))))"),
       make("binomial-len", "prob", "(-> (list nat) (F unit))", {"len", "binomial"},
            "(lam l (bind (len l) (n (binomial n))))"),
       Relation::Equal, sublist_domain, std::nullopt,
       "sublist l; ret tt = binomial |l| (exact distribution)"});

  add({"sublist-upper",
       make("sublist-unit", "prob", "(-> (list nat) (F unit))", {"sublist"},
            "(lam l (bind (sublist l) (r (ret tt))))"),
       make("sublist-bound", "prob", "(-> (list nat) (F unit))", {"len"},
            "(lam l (bind (len l) (n (step n (ret tt)))))"),
       Relation::LeqUpper, sublist_domain, std::nullopt, "sublist l; ret tt <= step^|l| (ret tt)"});

  add({"state-equal",
       make("state-double", "state:nat", "(F nat)", {"double"},
            "(get (n (bind (double n) (m (set m (ret n))))))"),
       make("state-bound", "state:nat", "(F nat)", {"add"},
            "(get (n (bind (add n n) (m (set m (step n (ret n)))))))"),
       Relation::Equal, nullptr, std::nullopt,
       "get n. double n; set 2n; ret n = get n. set 2n; step^n (ret n)"});

  const std::string tu = "(U (F nat))";
  add({"twice-upper",
       make("twice-unit", "prob", "(-> " + tu + " (F unit))", {"twice"},
            "(lam (e : " + tu + ") (bind (twice e) (r (ret tt))))"),
       make("twice-bound", "prob", "(-> " + tu + " (F unit))", {},
            "(lam (e : " + tu + ") (step 2 (ret tt)))"),
       Relation::LeqUpper, hypothesis_domain,
       Hypothesis{make("e-unit", "prob", "(-> " + tu + " (F unit))", {},
                       "(lam (e : " + tu + ") (bind e (r (ret tt))))"),
                  make("e-bound", "prob", "(-> " + tu + " (F unit))", {},
                       "(lam (e : " + tu + ") (step 1 (ret tt)))"),
                  Ty::thunk(Ty::ret(Ty::nat()))},
       "if e; ret tt <= step (ret tt) then twice e; ret tt <= step^2 (ret tt)"});

  const std::string fu = "(U (-> nat (F nat)))";
  const std::string map_ty = "(-> " + fu + " " + lnat + " (F unit))";
  const std::string premise_ty = "(-> " + fu + " nat (F unit))";
  const std::string map_unit = "(lam (f : " + fu + ") (lam l (bind (map f l) (r (ret tt)))))";
  const std::string f_unit = "(lam (f : " + fu + ") (lam x (bind (f x) (r (ret tt)))))";

  add({"map-const",
       make("map-unit", "nondet", map_ty, {"map"}, map_unit),
       make("map-const-bound", "nondet", map_ty, {"len", "mul"},
            "(lam (f : " + fu + ") (lam l (bind (len l) (n (bind (mul 2 n)"
            " (m (step m (ret tt))))))))"),
       Relation::LeqUpper, hypothesis_domain,
       Hypothesis{make("f-unit", "nondet", premise_ty, {}, f_unit),
                  make("f-bound", "nondet", premise_ty, {},
                       "(lam (f : " + fu + ") (lam x (step 2 (ret tt))))"),
                  Ty::thunk(Ty::arrow(Ty::nat(), Ty::ret(Ty::nat())))},
       "if f x; ret tt <= step^2 (ret tt) for all x then map f l; ret tt <= step^(2|l|) (ret tt)"});

  add({"map-binomial",
       make("map-unit", "prob", map_ty, {"map"}, map_unit),
       make("map-binomial-bound", "prob", map_ty, {"len", "mul", "binomial"},
            "(lam (f : " + fu + ") (lam l (bind (len l) (n (bind (mul 2 n)"
            " (m (binomial m)))))))"),
       Relation::LeqUpper, hypothesis_domain,
       Hypothesis{make("f-unit", "prob", premise_ty, {}, f_unit),
                  make("f-bound", "prob", premise_ty, {"binomial"},
                       "(lam (f : " + fu + ") (lam x (binomial 2)))"),
                  Ty::thunk(Ty::arrow(Ty::nat(), Ty::ret(Ty::nat())))},
       "if f x; ret tt <= binomial 2 for all x then map f l; ret tt <= binomial (2|l|)"});

  return out;
}

}  // namespace

const std::vector<BoundSpec>& corpus() {
  static const std::vector<BoundSpec> specs = build(defs());
  return specs;
}

const BoundSpec* find_spec(std::string_view n) {
  for (const auto& s : corpus()) {
    if (s.name == n) return &s;
  }
  return nullptr;
}

std::string library_source(std::string_view n) {
  const Def& d = def(defs(), n);
  return program_text(d.name, d.effect, d.type, with_helpers(defs(), d.deps, d.body));
}

Program library_program(std::string_view n) {
  Program p = parse_program(library_source(n));
  return elaborate(p);
}

std::vector<std::string> library_names() {
  std::vector<std::string> out;
  for (const auto& d : defs()) out.push_back(d.name);
  return out;
}

std::vector<std::string> reference_helpers() {
  std::vector<std::string> out;
  for (const auto& d : defs()) {
    if (d.reference) out.push_back(d.name);
  }
  return out;
}

std::vector<std::string> corpus_mutants() { return {"isort"}; }

std::vector<BoundSpec> mutated_corpus(std::string_view mutant) {
  if (mutant == "isort") {
    Table table = defs();
    // The comparison is no longer charged.
    std::find_if(table.begin(), table.end(), [](const Def& d) { return d.name == "insert"; })
        ->body =
        "(lam x (lam l (listrec l (ret (cons x nil))"
        " (y ys ih (bind (leq x y) (b (if b (ret (cons x (cons y ys)))"
        " (bind ih (r (ret (cons y r)))))))))))";
    return build(table);
  }
  throw std::invalid_argument(fmt::format("unknown corpus mutant '{}'", mutant));
}

}  // namespace cbpv
