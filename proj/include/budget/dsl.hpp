#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "budget/expr.hpp"
#include "budget/tuplix.hpp"

namespace budget::dsl {

struct Span {
  int line = 0;
  int column = 0;

  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Lexical, syntax and resolution errors. what() is "source:line:col: message".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, Span span, const std::string& message);
  Span span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  Span span_;
  std::string message_;
};

/// Condition inside test(...) or on the right of a def: a plain expression,
/// p <= q, p == q, or a flat conjunction of those.
struct Cond {
  enum class Kind { Plain, Leq, Eq, And };
  Kind kind = Kind::Plain;
  Span span;
  Expr lhs;
  Expr rhs;
  std::vector<Cond> parts;

  friend bool operator==(const Cond& a, const Cond& b);
};

/// Budget body as written, before references are spliced.
struct TuplixSyntax {
  enum class Kind { Eps, Delta, Entry, Test, Comp, Encap, Ref };
  Kind kind = Kind::Eps;
  Span span;
  std::string name;                   // Entry: channel, Ref: budget
  Expr amount;                        // Entry
  Cond cond;                          // Test
  std::vector<std::string> channels;  // Encap, in written order
  std::vector<TuplixSyntax> children; // Comp: two, Encap: one

  friend bool operator==(const TuplixSyntax& a, const TuplixSyntax& b);
};

struct Param {
  std::string name;
  std::optional<std::string> doc;
  Span span;
};

struct Definition {
  std::string name;
  Cond body;
  Span span;
};

struct BudgetDecl {
  std::string name;
  TuplixSyntax body;
  Span span;
};

struct BudgetProgram {
  enum class StmtKind { Param, Def, Budget };

  std::string source_name;
  std::vector<Param> params;
  std::vector<Definition> defs;
  std::vector<BudgetDecl> budgets;
  /// Declaration order across all three lists.
  std::vector<std::pair<StmtKind, std::size_t>> order;
  /// Position of every expression node created by the parser.
  std::unordered_map<const void*, Span> expr_spans;

  const Definition* find_def(std::string_view name) const;
  const BudgetDecl* find_budget(std::string_view name) const;

  /// Structural equality; spans and the source name are ignored.
  friend bool operator==(const BudgetProgram& a, const BudgetProgram& b);
};

/// Parses and resolves a budget file. Every identifier must be declared once;
/// defs and budgets may only refer to earlier declarations.
BudgetProgram parse(std::string_view text, std::string source_name = "");

/// Source text that parses back to a structurally identical program.
std::string to_source(const BudgetProgram& p);
std::string to_source(const Cond& c);
std::string to_source(const TuplixSyntax& t);

/// Desugars a condition into its test expression.
Expr cond_expr(const Cond& c);

class UnknownBudget : public std::invalid_argument {
 public:
  explicit UnknownBudget(const std::string& name) : std::invalid_argument("unknown budget '" + name + "'") {}
};

/// Builds the term for a budget: defs are inlined, conditions desugared to
/// zero tests, referenced budgets spliced in. Free variables of the result
/// are params only.
Tuplix elaborate(const BudgetProgram& p, std::string_view budget);

/// Fully inlined expression of a def (params stay free).
Expr elaborate_def(const BudgetProgram& p, std::string_view def);

std::vector<std::pair<std::string, std::string>> list_params(const BudgetProgram& p);

}  // namespace budget::dsl
