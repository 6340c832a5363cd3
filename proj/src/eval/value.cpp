#include "cbpv/eval/value.hpp"

#include <stdexcept>

namespace cbpv {

struct ValNode {
  Val a;
  Val b;
};

struct Env::Node {
  std::string name;
  Val val;
  std::shared_ptr<const Node> next;
};

namespace {

const ValNode& node_of(const std::shared_ptr<const void>& p) {
  return *static_cast<const ValNode*>(p.get());
}

}  // namespace

Val Val::boolean(bool b) {
  Val v;
  v.kind_ = ValKind::Bool;
  v.n_ = b ? 1 : 0;
  return v;
}

Val Val::nat(std::uint64_t n) {
  Val v;
  v.kind_ = ValKind::Nat;
  v.n_ = n;
  return v;
}

Val Val::pair(Val a, Val b) {
  Val v;
  v.kind_ = ValKind::Pair;
  v.node_ = std::make_shared<const ValNode>(ValNode{std::move(a), std::move(b)});
  return v;
}

Val Val::inl(Val x) {
  Val v;
  v.kind_ = ValKind::Inl;
  v.node_ = std::make_shared<const ValNode>(ValNode{std::move(x), {}});
  return v;
}

Val Val::inr(Val x) {
  Val v;
  v.kind_ = ValKind::Inr;
  v.node_ = std::make_shared<const ValNode>(ValNode{std::move(x), {}});
  return v;
}

Val Val::nil() {
  Val v;
  v.kind_ = ValKind::List;
  return v;
}

Val Val::cons(Val head, Val tail) {
  if (tail.kind_ != ValKind::List) throw std::invalid_argument("cons onto a non-list");
  Val v;
  v.kind_ = ValKind::List;
  v.n_ = tail.n_ + 1;  // length
  v.node_ = std::make_shared<const ValNode>(ValNode{std::move(head), std::move(tail)});
  return v;
}

Val Val::list(const std::vector<Val>& items) {
  Val out = nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, out);
  return out;
}

Val Val::nat_list(const std::vector<std::uint64_t>& items) {
  Val out = nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(nat(*it), out);
  return out;
}

Val Val::thunk(std::shared_ptr<const Thunk> t) {
  Val v;
  v.kind_ = ValKind::Thunk;
  v.node_ = std::move(t);
  return v;
}

const Val& Val::first() const {
  if (!node_ || kind_ == ValKind::Thunk) throw std::logic_error("value has no components");
  return node_of(node_).a;
}

const Val& Val::second() const {
  if (!node_ || kind_ == ValKind::Thunk) throw std::logic_error("value has no components");
  return node_of(node_).b;
}

std::size_t Val::length() const {
  if (kind_ != ValKind::List) throw std::logic_error("length of a non-list");
  return n_;
}

std::vector<Val> Val::items() const {
  std::vector<Val> out;
  out.reserve(length());
  for (const Val* cur = this; !cur->is_nil(); cur = &cur->tail()) out.push_back(cur->head());
  return out;
}

const Thunk& Val::thunk() const {
  if (kind_ != ValKind::Thunk) throw std::logic_error("not a thunk");
  return *static_cast<const Thunk*>(node_.get());
}

std::strong_ordering operator<=>(const Val& a, const Val& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  switch (a.kind_) {
    case ValKind::Unit:
      return std::strong_ordering::equal;
    case ValKind::Bool:
    case ValKind::Nat:
      return a.n_ <=> b.n_;
    case ValKind::Pair: {
      if (a.node_ == b.node_) return std::strong_ordering::equal;
      if (auto c = a.first() <=> b.first(); c != 0) return c;
      return a.second() <=> b.second();
    }
    case ValKind::Inl:
    case ValKind::Inr:
      if (a.node_ == b.node_) return std::strong_ordering::equal;
      return a.first() <=> b.first();
    case ValKind::List: {
      const Val* x = &a;
      const Val* y = &b;
      while (true) {
        if (x->node_ == y->node_) return std::strong_ordering::equal;
        if (x->is_nil()) return std::strong_ordering::less;
        if (y->is_nil()) return std::strong_ordering::greater;
        if (auto c = x->head() <=> y->head(); c != 0) return c;
        x = &x->tail();
        y = &y->tail();
      }
    }
    case ValKind::Thunk: {
      if (a.node_ == b.node_) return std::strong_ordering::equal;
      const Thunk& s = a.thunk();
      const Thunk& t = b.thunk();
      if (auto c = s.kind <=> t.kind; c != 0) return c;
      if (auto c = std::compare_three_way{}(s.term.get(), t.term.get()); c != 0) return c;
      if (auto c = s.at <=> t.at; c != 0) return c;
      return s.env <=> t.env;
    }
  }
  return std::strong_ordering::equal;
}

Env Env::extended(std::string name, Val v) const {
  Env out;
  out.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(v), head_});
  return out;
}

const Val& Env::lookup(std::string_view name) const {
  for (const Node* n = head_.get(); n; n = n->next.get()) {
    if (n->name == name) return n->val;
  }
  throw std::out_of_range("unbound variable at runtime: " + std::string(name));
}

std::strong_ordering operator<=>(const Env& a, const Env& b) {
  const Env::Node* x = a.head_.get();
  const Env::Node* y = b.head_.get();
  while (x != y) {
    if (!x) return std::strong_ordering::less;
    if (!y) return std::strong_ordering::greater;
    if (auto c = x->name <=> y->name; c != 0) return c;
    if (auto c = x->val <=> y->val; c != 0) return c;
    x = x->next.get();
    y = y->next.get();
  }
  return std::strong_ordering::equal;
}

std::string to_string(const Val& v) {
  switch (v.kind()) {
    case ValKind::Unit: return "tt";
    case ValKind::Bool: return v.as_bool() ? "true" : "false";
    case ValKind::Nat: return std::to_string(v.as_nat());
    case ValKind::Pair: return "(" + to_string(v.first()) + ", " + to_string(v.second()) + ")";
    case ValKind::Inl: return "inl " + to_string(v.payload());
    case ValKind::Inr: return "inr " + to_string(v.payload());
    case ValKind::List: {
      std::string out = "[";
      bool first = true;
      for (const auto& x : v.items()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(x);
      }
      return out + "]";
    }
    case ValKind::Thunk: return "<thunk>";
  }
  return "?";
}

}  // namespace cbpv
