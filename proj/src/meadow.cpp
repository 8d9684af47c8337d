#include "budget/meadow.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace budget {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ZeroDenominator("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::make(long num, long den) { return Rational(mpz_class(num), mpz_class(den)); }

Rational Rational::parse(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  mpz_class num;
  mpz_class den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto n = s.substr(0, slash);
    auto d = s.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) throw RationalSyntaxError("malformed rational '" + original + "'");
    num = mpz_class(std::string(n), 10);
    den = mpz_class(std::string(d), 10);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) throw RationalSyntaxError("malformed decimal '" + original + "'");
    num = mpz_class(std::string(whole) + std::string(frac), 10);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  } else {
    if (!all_digits(s)) throw RationalSyntaxError("malformed rational '" + original + "'");
    num = mpz_class(std::string(s), 10);
  }
  if (negative) num = -num;
  return Rational(num, den);
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal_string() const {
  if (is_integer()) return value_.get_num().get_str();
  mpz_class d = value_.get_den();
  unsigned twos = 0;
  unsigned fives = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) { d /= 2; ++twos; }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) { d /= 5; ++fives; }
  if (d != 1) return to_string();

  const unsigned digits = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scaled = value_.get_num() * (scale / value_.get_den());
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) {
    value_ = 0;
  } else {
    value_ /= rhs.value_;
  }
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational minv(const Rational& x) {
  if (x.is_zero()) return Rational();
  return Rational(1) / x;
}

Rational indicator(const Rational& x) { return div(x, x); }

Rational abs_val(const Rational& x) { return x.sign() >= 0 ? x : -x; }

Rational leq_encode(const Rational& p, const Rational& q) {
  const Rational diff = q - p;
  return abs_val(diff) - diff;
}

}  // namespace budget
