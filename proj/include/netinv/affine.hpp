// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "netinv/rational.hpp"
#include "netinv/variable.hpp"

namespace netinv {

/// Exact linear combination of variables plus a constant, kept in canonical
/// sparse form: no stored coefficient is zero, so equality of canonical
/// forms is structural equality.
class AffineExpr {
 public:
  AffineExpr() = default;
  explicit AffineExpr(Rational constant) : constant_(std::move(constant)) {}

  static AffineExpr variable(const VarId& v, Rational coeff = Rational(1));

  const std::map<VarId, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_.is_zero(); }

  /// Coefficient of v, zero when absent.
  Rational coeff(const VarId& v) const;
  bool mentions(const VarId& v) const { return terms_.count(v) != 0; }

  /// Adds c*v, erasing the term if the sum cancels.
  void add_term(const VarId& v, const Rational& c);
  void add_constant(const Rational& c) { constant_ += c; }

  AffineExpr operator-() const;
  AffineExpr& operator+=(const AffineExpr& o);
  AffineExpr& operator-=(const AffineExpr& o);
  AffineExpr& operator*=(const Rational& s);
  AffineExpr& operator/=(const Rational& s);

  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, const Rational& s) { return a *= s; }
  friend AffineExpr operator*(const Rational& s, AffineExpr a) { return a *= s; }
  friend AffineExpr operator/(AffineExpr a, const Rational& s) { return a /= s; }

  friend bool operator==(const AffineExpr& a, const AffineExpr& b) { return a.constant_ == b.constant_ && a.terms_ == b.terms_; }
  friend bool operator!=(const AffineExpr& a, const AffineExpr& b) { return !(a == b); }

  std::string str() const;

 private:
  std::map<VarId, Rational> terms_;
  Rational constant_;
};

/// Replaces each bound variable by its expression; unbound variables pass
/// through unchanged. Exact, flattened to canonical form.
AffineExpr affine_substitute(const AffineExpr& target, const std::map<VarId, AffineExpr>& bindings);

/// Exact value under a total assignment. Throws MissingVariable when a
/// referenced variable is unassigned.
Rational affine_evaluate(const AffineExpr& expr, const std::map<VarId, Rational>& assignment);

/// Ordered affine outputs; the universal "solved layer" shape. Component i
/// gives input x_i as a function of output, free, and slack variables.
struct AffineMap {
  std::vector<AffineExpr> outputs;

  std::set<VarId> input_universe() const;
};

}  // namespace netinv
