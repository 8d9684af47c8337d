#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "budget/dsl.hpp"
#include "budget/expr.hpp"
#include "budget/sampling.hpp"
#include "budget/tuplix.hpp"

using budget::Expr;
using budget::Rational;
using budget::Valuation;

namespace {

Expr x() { return Expr::var("x"); }
Expr y() { return Expr::var("y"); }
Expr z() { return Expr::var("z"); }
Expr c(long n, long d = 1) { return Expr::constant(Rational::make(n, d)); }

}  // namespace

TEST_CASE("evaluation is total") {
  Valuation v{{"x", Rational(0)}, {"y", Rational(4)}};
  budget::EvalStats stats;
  CHECK(eval(c(1) / c(0), v, &stats) == Rational(0));
  CHECK(eval(y() / x(), v, &stats) == Rational(0));
  CHECK(stats.zero_inverses == 2);
  CHECK(eval(x() / x(), v) == Rational(0));
  CHECK(eval(y() / y(), v) == Rational(1));
  CHECK(eval(Expr::abs(x() - y()), v) == Rational(4));
}

TEST_CASE("unbound variables are reported by name") {
  try {
    eval(x() + Expr::var("A:nec"), Valuation{{"x", Rational(1)}});
    FAIL("expected UnboundVariable");
  } catch (const budget::UnboundVariable& e) {
    CHECK(e.name() == "A:nec");
  }
  CHECK_THROWS_AS(Expr::var(""), std::invalid_argument);
}

TEST_CASE("structural equality and order") {
  CHECK(x() + y() == x() + y());
  CHECK_FALSE(x() + y() == y() + x());
  CHECK(Expr() == c(0));
  CHECK(budget::compare(x() + y(), x() + y()) == 0);
  const int ab = budget::compare(x() + y(), y() + x());
  const int ba = budget::compare(y() + x(), x() + y());
  CHECK(ab != 0);
  CHECK(ab == -ba);
}

TEST_CASE("free variables") {
  CHECK(free_vars(x() * (y() - c(3)) + x()) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(c(2) / c(0)).empty());
}

TEST_CASE("substitution") {
  CHECK(substitute(x() + y(), "x", c(2)) == c(2) + y());
  std::map<std::string, Expr, std::less<>> swap{{"x", y()}, {"y", x()}};
  CHECK(substitute(x() - y(), swap) == y() - x());
  Valuation v{{"y", Rational(5)}};
  CHECK(substitute(x() * y(), v) == x() * c(5));
  // Unchanged subtrees are shared, not copied.
  Expr big = (x() + y()) * z();
  CHECK(substitute(big, "w", c(1)).id() == big.id());
}

TEST_CASE("constant folding") {
  using budget::fold_constants;
  CHECK(fold_constants(x() + c(0)) == x());
  CHECK(fold_constants(c(0) + x()) == x());
  CHECK(fold_constants(c(0) * x()) == c(0));
  CHECK(fold_constants(x() * c(1)) == x());
  CHECK(fold_constants((c(2) + c(3)) * x()) == c(5) * x());
  CHECK(fold_constants(-(-x())) == x());
  CHECK(fold_constants(Expr::inv(Expr::inv(x()))) == x());
  CHECK(fold_constants(c(1) / c(0)) == c(0));
  CHECK(fold_constants(Expr::abs(c(-3, 2))) == c(3, 2));
  // x/x is 0 at x = 0, so it must survive folding.
  CHECK(fold_constants(x() / x()) == x() / x());
}

TEST_CASE("folding and substitution preserve values") {
  const std::vector<std::string> vars{"x", "y", "z"};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    Expr e = budget::random_expr(rng, vars, 4);
    budget::RationalSampler s(rng());
    Valuation v{{"x", s.next()}, {"y", s.next()}, {"z", s.next()}};
    CHECK(eval(budget::fold_constants(e), v) == eval(e, v));
    Valuation partial{{"x", v.at("x")}};
    CHECK(eval(substitute(e, partial), v) == eval(e, v));
  }
}

TEST_CASE("randomized equivalence") {
  CHECK(budget::equiv_prob(x() * (y() + z()), x() * y() + x() * z(), 1000, 1));
  CHECK(budget::equiv_prob(x() * (x() * Expr::inv(x())), x(), 1000, 1));
  CHECK_FALSE(budget::equiv_prob(x() / x(), c(1), 1000, 1));
  CHECK_FALSE(budget::equiv_prob(x() + y(), x() - y(), 1000, 1));
}

TEST_CASE("printing") {
  using budget::to_string;
  CHECK(to_string(x() - y()) == "x - y");
  CHECK(to_string(x() - (y() - z())) == "x - (y - z)");
  CHECK(to_string(x() * (y() + z())) == "x * (y + z)");
  CHECK(to_string(x() / (y() * z())) == "x / (y * z)");
  CHECK(to_string(Expr::abs(x())) == "abs(x)");
  CHECK(to_string(c(1, 3)) == "1/3");
  CHECK(to_string(c(5, 2)) == "2.5");
  CHECK(to_string(Expr::var("A:nec") * Expr::var("cpec")) == "A:nec * cpec");
}

TEST_CASE("printed expressions parse back to equal values") {
  const std::vector<std::string> vars{"x", "y", "z"};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Expr e = budget::random_expr(rng, vars, 4);
    const std::string text = "param x\nparam y\nparam z\ndef e = " + to_string(e) + "\n";
    auto program = budget::dsl::parse(text);
    Expr back = budget::dsl::elaborate_def(program, "e");
    INFO(text);
    CHECK(budget::equiv_prob(back, e, 50, static_cast<std::uint64_t>(i)));
  }
}
