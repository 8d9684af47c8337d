#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "budget/meadow.hpp"
#include "budget/sampling.hpp"

using budget::Rational;

namespace {

Rational q(const char* text) { return Rational::parse(text); }

}  // namespace

TEST_CASE("parse accepts integers, fractions and exact decimals") {
  CHECK(q("3/6") == Rational::make(1, 2));
  CHECK(q("-0.125") == Rational::make(-1, 8));
  CHECK(q("  7 ") == Rational(7));
  CHECK(q("+4/2") == Rational(2));
  CHECK(q("-6/4").to_string() == "-3/2");
  CHECK(q("0.50") == Rational::make(1, 2));
  CHECK(q("-0") == Rational(0));
}

TEST_CASE("parse rejects malformed text") {
  CHECK_THROWS_AS(q("1/0"), budget::ZeroDenominator);
  CHECK_THROWS_AS(q(""), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("abc"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("1/2/3"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("1e3"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("1.5/2"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("1 2"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("3/-6"), budget::RationalSyntaxError);
  CHECK_THROWS_AS(q("1."), budget::RationalSyntaxError);
  CHECK(q("007") == Rational(7));
  CHECK(q("0.0625") == Rational::make(1, 16));
}

TEST_CASE("canonical form") {
  CHECK(Rational::make(2, -4).to_string() == "-1/2");
  CHECK(Rational::make(0, -5).to_string() == "0");
  CHECK(Rational::make(10, 5).is_integer());
  CHECK_THROWS_AS(Rational::make(1, 0), budget::ZeroDenominator);
  CHECK(Rational::make(6, 4).num() == 3);
  CHECK(Rational::make(6, 4).den() == 2);
}

TEST_CASE("decimal rendering is exact or falls back to n/d") {
  CHECK(Rational::make(1, 8).to_decimal_string() == "0.125");
  CHECK(Rational::make(-5, 2).to_decimal_string() == "-2.5");
  CHECK(Rational(7).to_decimal_string() == "7");
  CHECK(Rational::make(1, 3).to_decimal_string() == "1/3");
  CHECK(Rational::make(1, 80).to_decimal_string() == "0.0125");
  std::ostringstream os;
  os << Rational::make(-2, 6);
  CHECK(os.str() == "-1/3");
}

TEST_CASE("arithmetic matches independently computed values") {
  CHECK(q("1/3") + q("1/6") == q("1/2"));
  CHECK(q("-7/12") * q("18/35") == q("-3/10"));
  CHECK(q("123456789/987654321") + q("-987654321/123456789") == q("-11854561469626920/1505341124847349"));
  const Rational big = q("1267650600228229401496703205376");  // 2^100
  CHECK((big * big).to_string() == "1606938044258990275541962092341162602522202993782792835301376");
  const Rational r = q("1267650600228229401496703205377/12157665459056928801");  // (2^100+1)/3^40
  CHECK(r * budget::minv(r) == Rational(1));
}

TEST_CASE("division by zero is total") {
  CHECK(budget::minv(Rational(0)) == Rational(0));
  CHECK(budget::div(Rational(5), Rational(0)) == Rational(0));
  CHECK(Rational(5) / Rational(0) == Rational(0));
  CHECK(budget::minv(q("-2/3")) == q("-3/2"));
}

TEST_CASE("indicator, abs and the leq encoding") {
  CHECK(budget::indicator(Rational(0)) == Rational(0));
  CHECK(budget::indicator(q("-3/4")) == Rational(1));
  CHECK(budget::abs_val(q("-3/4")) == q("3/4"));
  CHECK(budget::abs_val(Rational(0)) == Rational(0));
  CHECK(budget::leq_encode(Rational(1), Rational(2)) == Rational(0));
  CHECK(budget::leq_encode(Rational(2), Rational(2)) == Rational(0));
  CHECK(budget::leq_encode(Rational(3), Rational(1)) == Rational(4));
}

TEST_CASE("ordering agrees with the sign of the difference") {
  budget::RationalSampler s(42);
  for (int i = 0; i < 2000; ++i) {
    const Rational x = s.next(), y = s.next();
    CHECK((x < y) == ((y - x).sign() > 0));
    CHECK((x == y) == (x - y).is_zero());
  }
}

TEST_CASE("division laws under sampling") {
  budget::RationalSampler s(7);
  for (int i = 0; i < 2000; ++i) {
    const Rational x = s.next(), y = s.next();
    CHECK((x / y) * y == (y.is_zero() ? Rational(0) : x));
    CHECK(budget::minv(x * y) == budget::minv(x) * budget::minv(y));
    CHECK(budget::indicator(x) * x == x);
  }
}

TEST_CASE("sampler is deterministic and hits zero often") {
  budget::RationalSampler a(99), b(99);
  int zeros = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Rational x = a.next();
    CHECK(x == b.next());
    if (x.is_zero()) ++zeros;
  }
  // Default zero weight is 1/4, plus the occasional drawn 0 numerator.
  CHECK(zeros > n / 5);
  CHECK(zeros < n / 3);
}

TEST_CASE("derived seeds differ across indices and roots") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t root = 0; root < 4; ++root) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(budget::derive_seed(root, i));
  }
  CHECK(seen.size() == 4000);
  CHECK(budget::derive_seed(1, 2) == budget::derive_seed(1, 2));
}
