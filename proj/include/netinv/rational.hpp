// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace netinv {

/// Exact arbitrary-precision rational number. Always kept canonical:
/// gcd(|num|, den) = 1 and den > 0. Every operation is exact.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}  // NOLINT: implicit by design
  Rational(int n) : v_(n) {}                             // NOLINT
  Rational(long num, long den);

  /// Parses "p/q", "p", or decimal text ("-3.25", "1e-2", "0.1"); decimal
  /// text converts exactly (0.1 -> 1/10). Throws std::invalid_argument.
  static Rational from_string(std::string_view text);

  static Rational from_mpq(mpq_class q);
  const mpq_class& raw() const { return v_; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);  // throws on division by zero

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  Rational abs() const;

  /// Canonical text form "p/q", with "/q" omitted when q = 1.
  std::string str() const;
  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }

  /// Inexact, for diagnostics only.
  double approx() const { return v_.get_d(); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  explicit Rational(mpq_class q) : v_(std::move(q)) {}
  mpq_class v_;
};

}  // namespace netinv
