#include "budget/expr.hpp"

#include <unordered_map>

#include "budget/sampling.hpp"

namespace budget {

UnboundVariable::UnboundVariable(std::string name)
    : std::runtime_error("unbound variable '" + name + "'"), name_(std::move(name)) {}

struct Expr::Node {
  Kind kind;
  Rational value;
  std::string name;
  Expr lhs;
  Expr rhs;

  // The two Expr members of a leaf must not allocate, or Node construction
  // would recurse; leaves therefore start from a null node pointer.
  explicit Node(Kind k) : kind(k), lhs(nullptr), rhs(nullptr) {}
};

Expr::Expr() : Expr(constant(Rational())) {}

Expr Expr::constant(Rational value) {
  auto n = std::make_shared<Node>(Kind::Const);
  n->value = std::move(value);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::var(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  auto n = std::make_shared<Node>(Kind::Var);
  n->name = std::move(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::add(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>(Kind::Add);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::mul(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>(Kind::Mul);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::neg(Expr arg) {
  auto n = std::make_shared<Node>(Kind::Neg);
  n->lhs = std::move(arg);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::inv(Expr arg) {
  auto n = std::make_shared<Node>(Kind::Inv);
  n->lhs = std::move(arg);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::abs(Expr arg) {
  auto n = std::make_shared<Node>(Kind::Abs);
  n->lhs = std::move(arg);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
const Expr& Expr::arg() const { return node_->lhs; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Const:
      return a.value() == b.value();
    case Expr::Kind::Var:
      return a.name() == b.name();
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    default:
      return a.arg() == b.arg();
  }
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Expr::Kind::Const: {
      auto c = a.value() <=> b.value();
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Expr::Kind::Var:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      if (int c = compare(a.lhs(), b.lhs()); c != 0) return c;
      return compare(a.rhs(), b.rhs());
    default:
      return compare(a.arg(), b.arg());
  }
}

Rational eval(const Expr& e, const Valuation& v, EvalStats* stats) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return e.value();
    case Expr::Kind::Var: {
      auto it = v.find(e.name());
      if (it == v.end()) throw UnboundVariable(e.name());
      return it->second;
    }
    case Expr::Kind::Add:
      return eval(e.lhs(), v, stats) + eval(e.rhs(), v, stats);
    case Expr::Kind::Mul:
      return eval(e.lhs(), v, stats) * eval(e.rhs(), v, stats);
    case Expr::Kind::Neg:
      return -eval(e.arg(), v, stats);
    case Expr::Kind::Inv: {
      Rational x = eval(e.arg(), v, stats);
      if (stats && x.is_zero()) ++stats->zero_inverses;
      return minv(x);
    }
    case Expr::Kind::Abs:
      return abs_val(eval(e.arg(), v, stats));
  }
  return Rational();
}

void collect_free_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return;
    case Expr::Kind::Var:
      out.insert(e.name());
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      collect_free_vars(e.lhs(), out);
      collect_free_vars(e.rhs(), out);
      return;
    default:
      collect_free_vars(e.arg(), out);
  }
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_free_vars(e, out);
  return out;
}

namespace {

/// Rebuilds a term bottom-up through `leaf`, reusing nodes whose children did
/// not change. Shared subterms are visited once.
template <class Leaf>
class Rebuilder {
 public:
  explicit Rebuilder(Leaf leaf) : leaf_(std::move(leaf)) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr out = rebuild(e);
    memo_.emplace(e.id(), out);
    return out;
  }

 private:
  Expr rebuild(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Const:
      case Expr::Kind::Var:
        return leaf_(e);
      case Expr::Kind::Add:
      case Expr::Kind::Mul: {
        Expr l = (*this)(e.lhs());
        Expr r = (*this)(e.rhs());
        if (l.id() == e.lhs().id() && r.id() == e.rhs().id()) return e;
        return e.kind() == Expr::Kind::Add ? Expr::add(l, r) : Expr::mul(l, r);
      }
      case Expr::Kind::Neg:
      case Expr::Kind::Inv:
      case Expr::Kind::Abs: {
        Expr a = (*this)(e.arg());
        if (a.id() == e.arg().id()) return e;
        if (e.kind() == Expr::Kind::Neg) return Expr::neg(a);
        if (e.kind() == Expr::Kind::Inv) return Expr::inv(a);
        return Expr::abs(a);
      }
    }
    return e;
  }

  Leaf leaf_;
  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  Rebuilder r([&](const Expr& leaf) { return leaf.is_var() && leaf.name() == name ? replacement : leaf; });
  return r(e);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (replacements.empty()) return e;
  Rebuilder r([&](const Expr& leaf) {
    if (leaf.is_var()) {
      if (auto it = replacements.find(leaf.name()); it != replacements.end()) return it->second;
    }
    return leaf;
  });
  return r(e);
}

Expr substitute(const Expr& e, const Valuation& v) {
  if (v.empty()) return e;
  Rebuilder r([&](const Expr& leaf) {
    if (leaf.is_var()) {
      if (auto it = v.find(leaf.name()); it != v.end()) return Expr::constant(it->second);
    }
    return leaf;
  });
  return r(e);
}

namespace {

bool is_const_value(const Expr& e, long v) { return e.is_const() && e.value() == Rational(v); }

class Folder {
 public:
  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr out = fold(e);
    memo_.emplace(e.id(), out);
    return out;
  }

 private:
  Expr fold(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Const:
      case Expr::Kind::Var:
        return e;
      case Expr::Kind::Add: {
        Expr l = (*this)(e.lhs());
        Expr r = (*this)(e.rhs());
        if (l.is_const() && r.is_const()) return Expr::constant(l.value() + r.value());
        if (is_const_value(l, 0)) return r;
        if (is_const_value(r, 0)) return l;
        return same(e, l, r) ? e : Expr::add(l, r);
      }
      case Expr::Kind::Mul: {
        Expr l = (*this)(e.lhs());
        Expr r = (*this)(e.rhs());
        if (l.is_const() && r.is_const()) return Expr::constant(l.value() * r.value());
        if (is_const_value(l, 0) || is_const_value(r, 0)) return Expr::constant(Rational());
        if (is_const_value(l, 1)) return r;
        if (is_const_value(r, 1)) return l;
        return same(e, l, r) ? e : Expr::mul(l, r);
      }
      case Expr::Kind::Neg: {
        Expr a = (*this)(e.arg());
        if (a.is_const()) return Expr::constant(-a.value());
        if (a.kind() == Expr::Kind::Neg) return a.arg();
        return a.id() == e.arg().id() ? e : Expr::neg(a);
      }
      case Expr::Kind::Inv: {
        Expr a = (*this)(e.arg());
        if (a.is_const()) return Expr::constant(minv(a.value()));
        if (a.kind() == Expr::Kind::Inv) return a.arg();
        return a.id() == e.arg().id() ? e : Expr::inv(a);
      }
      case Expr::Kind::Abs: {
        Expr a = (*this)(e.arg());
        if (a.is_const()) return Expr::constant(abs_val(a.value()));
        return a.id() == e.arg().id() ? e : Expr::abs(a);
      }
    }
    return e;
  }

  static bool same(const Expr& e, const Expr& l, const Expr& r) {
    return l.id() == e.lhs().id() && r.id() == e.rhs().id();
  }

  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace

Expr fold_constants(const Expr& e) {
  Folder f;
  return f(e);
}

bool equiv_prob(const Expr& a, const Expr& b, std::size_t trials, std::uint64_t seed) {
  std::set<std::string> vars = free_vars(a);
  collect_free_vars(b, vars);
  for (std::size_t t = 0; t < trials; ++t) {
    RationalSampler sampler(derive_seed(seed, t));
    Valuation v;
    for (const auto& name : vars) v.emplace(name, sampler.next());
    if (eval(a, v) != eval(b, v)) return false;
  }
  return true;
}

namespace {

constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kUnary = 3;
constexpr int kAtom = 4;

std::string print(const Expr& e, int context);

std::string wrap(std::string s, int prec, int context) {
  return prec < context ? "(" + s + ")" : s;
}

std::string print_const(const Rational& r, int context) {
  if (r.sign() < 0) return wrap("-" + print_const(-r, kAtom), kUnary, context);
  std::string text = r.to_decimal_string();
  const bool atom = text.find('/') == std::string::npos;
  return wrap(text, atom ? kAtom : kMultiplicative, context);
}

std::string print(const Expr& e, int context) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return print_const(e.value(), context);
    case Expr::Kind::Var:
      return e.name();
    case Expr::Kind::Add: {
      std::string s = print(e.lhs(), kAdditive);
      if (e.rhs().kind() == Expr::Kind::Neg) {
        s += " - " + print(e.rhs().arg(), kMultiplicative);
      } else {
        s += " + " + print(e.rhs(), kMultiplicative);
      }
      return wrap(std::move(s), kAdditive, context);
    }
    case Expr::Kind::Mul: {
      std::string s = print(e.lhs(), kMultiplicative);
      if (e.rhs().kind() == Expr::Kind::Inv) {
        s += " / " + print(e.rhs().arg(), kUnary);
      } else {
        s += " * " + print(e.rhs(), kUnary);
      }
      return wrap(std::move(s), kMultiplicative, context);
    }
    case Expr::Kind::Neg:
      return wrap("-" + print(e.arg(), kAtom), kUnary, context);
    case Expr::Kind::Inv:
      return wrap("1 / " + print(e.arg(), kUnary), kMultiplicative, context);
    case Expr::Kind::Abs:
      return "abs(" + print(e.arg(), 0) + ")";
  }
  return {};
}

}  // namespace

std::string to_string(const Expr& e) { return print(e, 0); }

}  // namespace budget
