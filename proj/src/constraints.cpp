#include "budget/constraints.hpp"

#include <stdexcept>

namespace budget {

Expr leq_expr(const Expr& p, const Expr& q) {
  Expr diff = Expr::sub(q, p);
  return Expr::sub(Expr::abs(diff), diff);
}

Expr eq_expr(const Expr& p, const Expr& q) { return Expr::sub(p, q); }

Expr and_expr(const std::vector<Expr>& args) {
  if (args.empty()) throw std::invalid_argument("conjunction of no constraints");
  auto indicator = [](const Expr& e) { return Expr::div(e, e); };
  Expr acc = indicator(args.front());
  for (std::size_t i = 1; i < args.size(); ++i) acc = Expr::add(acc, indicator(args[i]));
  return acc;
}

}  // namespace budget
