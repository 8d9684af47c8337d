#pragma once

#include <vector>

#include "budget/expr.hpp"
#include "budget/tuplix.hpp"

namespace budget {

/// |q - p| - (q - p): zero exactly where p <= q.
Expr leq_expr(const Expr& p, const Expr& q);
/// p - q: zero exactly where p == q.
Expr eq_expr(const Expr& p, const Expr& q);
/// a1/a1 + ... + an/an, left-associated: zero exactly where every ai is zero.
/// Throws std::invalid_argument for an empty list.
Expr and_expr(const std::vector<Expr>& args);

inline Tuplix test_leq(const Expr& p, const Expr& q) { return Tuplix::test(leq_expr(p, q)); }
inline Tuplix test_eq(const Expr& p, const Expr& q) { return Tuplix::test(eq_expr(p, q)); }
inline Tuplix test_and(const std::vector<Expr>& args) { return Tuplix::test(and_expr(args)); }

// Strict inequality is intentionally absent.

}  // namespace budget
