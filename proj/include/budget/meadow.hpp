#pragma once

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace budget {

/// Raised when a rational literal or constructor call has a zero denominator.
/// Meadow division by zero is total and never raises this.
class ZeroDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RationalSyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact rational number, always in reduced form with a positive denominator.
///
/// Arithmetic follows the zero-totalized meadow of rationals: the usual field
/// operations plus a total inverse with minv(0) == 0. Because the form is
/// canonical, equality of values is equality of (num, den).
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT: integers convert implicitly
  Rational(const mpz_class& num, const mpz_class& den);

  /// Throws ZeroDenominator when den == 0.
  static Rational make(long num, long den);

  /// Accepts an optional sign followed by an integer, "n/d", or an exact
  /// decimal such as "0.25". Surrounding whitespace is ignored.
  static Rational parse(std::string_view text);

  mpz_class num() const { return value_.get_num(); }
  mpz_class den() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// Canonical text: "n/d", or "n" when the denominator is 1.
  std::string to_string() const;
  /// Exact decimal text when the denominator has only factors 2 and 5,
  /// otherwise the canonical "n/d" form.
  std::string to_decimal_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  /// Meadow division: x / 0 == 0.
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return value_; }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}

  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Named meadow operations. The operators above are equivalent; these exist so
/// that algebraic code can name the operation it relies on.
inline Rational add(const Rational& x, const Rational& y) { return x + y; }
inline Rational sub(const Rational& x, const Rational& y) { return x - y; }
inline Rational mul(const Rational& x, const Rational& y) { return x * y; }
inline Rational neg(const Rational& x) { return -x; }

/// Total multiplicative inverse; minv(0) == 0.
Rational minv(const Rational& x);
inline Rational div(const Rational& x, const Rational& y) { return x * minv(y); }

/// x/x: 0 when x == 0, 1 otherwise.
Rational indicator(const Rational& x);
Rational abs_val(const Rational& x);

/// |q - p| - (q - p). Zero exactly when p <= q, positive otherwise.
Rational leq_encode(const Rational& p, const Rational& q);

}  // namespace budget
