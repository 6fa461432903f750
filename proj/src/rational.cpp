// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace netinv {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_rational(std::string_view text) {
  throw std::invalid_argument("invalid rational literal: \"" + std::string(text) + "\"");
}

// Exact conversion of decimal text: sign, integer part, optional fraction,
// optional base-10 exponent.
mpq_class parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  long exponent = 0;
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits.push_back(s[i++]);
      ++frac_len;
    }
  }
  if (digits.empty()) bad_rational(text);
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_neg = s[i] == '-';
      ++i;
    }
    std::string_view exp_digits = s.substr(i);
    if (!all_digits(exp_digits) || exp_digits.size() > 6) bad_rational(text);
    for (char c : exp_digits) exponent = exponent * 10 + (c - '0');
    if (exp_neg) exponent = -exponent;
    i = s.size();
  }
  if (i != s.size()) bad_rational(text);

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long scale = exponent - frac_len;
  mpz_class num = mantissa;
  mpz_class den = 1;
  if (scale > 0) {
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale));
    num *= pow10;
  } else if (scale < 0) {
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(-scale));
  }
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpq_class parse_fraction(std::string_view text) {
  // "-p/q" or "p": validate before handing to GMP so garbage is rejected.
  std::string_view s = text;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!all_digits(s)) bad_rational(text);
  } else {
    if (!all_digits(s.substr(0, slash)) || !all_digits(s.substr(slash + 1))) bad_rational(text);
  }
  mpq_class q;
  if (q.set_str(std::string(text), 10) != 0) bad_rational(text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in rational literal: \"" + std::string(text) + "\"");
  q.canonicalize();
  return q;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::from_string(std::string_view text) {
  if (text.empty()) bad_rational(text);
  if (text.find('.') != std::string_view::npos || text.find('e') != std::string_view::npos ||
      text.find('E') != std::string_view::npos) {
    return Rational(parse_decimal(text));
  }
  return Rational(parse_fraction(text));
}

Rational Rational::from_mpq(mpq_class q) {
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::operator-() const { return Rational(mpq_class(-v_)); }

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace netinv
