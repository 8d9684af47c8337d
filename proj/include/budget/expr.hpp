#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "budget/meadow.hpp"

namespace budget {

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Variable bindings: identifier -> exact value.
using Valuation = std::map<std::string, Rational, std::less<>>;

/// Immutable symbolic term over the meadow of rationals.
///
/// Subtraction and division have no node of their own:
/// a - b is Add(a, Neg(b)) and a / b is Mul(a, Inv(b)).
/// Copies share structure; equality is structural.
class Expr {
 public:
  enum class Kind { Const, Var, Add, Mul, Neg, Inv, Abs };

  Expr();  // Const 0

  static Expr constant(Rational value);
  static Expr var(std::string name);
  static Expr add(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr neg(Expr arg);
  static Expr inv(Expr arg);
  static Expr abs(Expr arg);
  static Expr sub(Expr lhs, Expr rhs) { return add(std::move(lhs), neg(std::move(rhs))); }
  static Expr div(Expr lhs, Expr rhs) { return mul(std::move(lhs), inv(std::move(rhs))); }

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  bool is_var() const { return kind() == Kind::Var; }

  /// Valid for Const only.
  const Rational& value() const;
  /// Valid for Var only.
  const std::string& name() const;
  /// Valid for Add and Mul.
  const Expr& lhs() const;
  const Expr& rhs() const;
  /// Valid for Neg, Inv and Abs.
  const Expr& arg() const;

  /// Identity of the shared node, for side tables keyed on syntax nodes.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Structural total order, used to make canonical output deterministic.
int compare(const Expr& a, const Expr& b);

inline Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::sub(std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::div(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

struct EvalStats {
  /// Number of inverse nodes whose argument evaluated to 0.
  std::size_t zero_inverses = 0;
};

/// Total evaluation. Throws UnboundVariable when a free variable is missing
/// from the valuation; arithmetic never fails.
Rational eval(const Expr& e, const Valuation& v, EvalStats* stats = nullptr);

std::set<std::string> free_vars(const Expr& e);
void collect_free_vars(const Expr& e, std::set<std::string>& out);

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);
/// Simultaneous substitution; names missing from the map are left alone.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);
/// Replaces every bound variable with its constant value.
Expr substitute(const Expr& e, const Valuation& v);

/// Bottom-up constant folding with the valuation-independent identities
/// x+0 = x, x*1 = x, x*0 = 0, --x = x and 1/(1/x) = x.
/// x/x is deliberately left alone: it is 0, not 1, at x = 0.
Expr fold_constants(const Expr& e);

/// Randomized semi-decision of semantic equality: evaluates both sides on
/// `trials` valuations drawn with zero-inclusive sampling (see
/// SamplingPolicy). Deterministic in `seed`.
bool equiv_prob(const Expr& a, const Expr& b, std::size_t trials, std::uint64_t seed);

/// Concrete syntax accepted by the budget language parser.
std::string to_string(const Expr& e);

}  // namespace budget
