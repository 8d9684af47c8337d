#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "budget/constraints.hpp"
#include "budget/sampling.hpp"

using budget::Expr;
using budget::GroundForm;
using budget::Rational;
using budget::Tuplix;

namespace {

Expr c(long n, long d = 1) { return Expr::constant(Rational::make(n, d)); }
bool passes(const Tuplix& t) { return !denote_ground(t, {}).null; }

}  // namespace

TEST_CASE("leq encoding") {
  CHECK(passes(budget::test_leq(c(1), c(2))));
  CHECK(passes(budget::test_leq(c(2), c(2))));
  CHECK_FALSE(passes(budget::test_leq(c(3), c(2))));
  CHECK(passes(budget::test_leq(c(-1, 3), c(-1, 4))));
  CHECK(eval(budget::leq_expr(c(3), c(1)), {}) == Rational(4));
}

TEST_CASE("eq encoding") {
  CHECK(passes(budget::test_eq(c(1, 2), c(2, 4))));
  CHECK_FALSE(passes(budget::test_eq(c(1), c(2))));
}

TEST_CASE("conjunction") {
  CHECK(passes(budget::test_and({c(0), c(0), c(0)})));
  CHECK_FALSE(passes(budget::test_and({c(0), c(5), c(0)})));
  // Opposite values must not cancel: indicators are 0 or 1.
  CHECK_FALSE(passes(budget::test_and({c(1), c(-1)})));
  CHECK_THROWS_AS(budget::and_expr({}), std::invalid_argument);
  const Expr x = Expr::var("x"), y = Expr::var("y");
  CHECK(budget::and_expr({x, y}) == x / x + y / y);
  CHECK(budget::and_expr({x, y, x}) == (x / x + y / y) + x / x);
}

TEST_CASE("leq holds exactly when p <= q under sampling") {
  budget::RationalSampler s(3);
  for (int i = 0; i < 3000; ++i) {
    const Rational p = s.next(), q = s.next();
    CHECK(passes(budget::test_leq(Expr::constant(p), Expr::constant(q))) == (p <= q));
  }
}

TEST_CASE("symbolic constraints evaluate under valuations") {
  const Expr k = Expr::var("k");
  Tuplix t = budget::test_leq(k, c(1)) | budget::test_leq(c(0), k);
  CHECK_FALSE(denote_ground(t, {{"k", Rational::make(1, 2)}}).null);
  CHECK(denote_ground(t, {{"k", Rational::make(3, 2)}}).null);
  CHECK(denote_ground(t, {{"k", Rational(-1)}}).null);
}
