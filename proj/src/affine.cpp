// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/affine.hpp"

#include <sstream>
#include <stdexcept>

#include "netinv/errors.hpp"

namespace netinv {

std::string to_string(const VarId& v) {
  std::ostringstream os;
  switch (v.kind) {
    case VarKind::Output:
      os << 'y' << v.index;
      break;
    case VarKind::Free:
      os << 't' << v.generation << '.' << v.index;
      break;
    case VarKind::Slack:
      os << 's' << v.generation << '.' << v.index;
      break;
    case VarKind::Input:
      os << 'x' << v.generation << '.' << v.index;
      break;
  }
  return os.str();
}

AffineExpr AffineExpr::variable(const VarId& v, Rational coeff) {
  AffineExpr e;
  e.add_term(v, coeff);
  return e;
}

Rational AffineExpr::coeff(const VarId& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AffineExpr::add_term(const VarId& v, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(v, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AffineExpr AffineExpr::operator-() const {
  AffineExpr out;
  out.constant_ = -constant_;
  for (const auto& [v, c] : terms_) out.terms_.emplace(v, -c);
  return out;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
  constant_ += o.constant_;
  for (const auto& [v, c] : o.terms_) add_term(v, c);
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) {
  constant_ -= o.constant_;
  for (const auto& [v, c] : o.terms_) add_term(v, -c);
  return *this;
}

AffineExpr& AffineExpr::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    constant_ = Rational(0);
    return *this;
  }
  constant_ *= s;
  for (auto& [v, c] : terms_) c *= s;
  return *this;
}

AffineExpr& AffineExpr::operator/=(const Rational& s) {
  if (s.is_zero()) throw std::invalid_argument("affine expression division by zero");
  constant_ /= s;
  for (auto& [v, c] : terms_) c /= s;
  return *this;
}

std::string AffineExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : terms_) {
    if (first) {
      if (c == Rational(1)) {
        os << to_string(v);
      } else if (c == Rational(-1)) {
        os << '-' << to_string(v);
      } else {
        os << c.str() << '*' << to_string(v);
      }
      first = false;
      continue;
    }
    if (c.sign() < 0) {
      os << " - ";
      Rational a = c.abs();
      if (a == Rational(1)) {
        os << to_string(v);
      } else {
        os << a.str() << '*' << to_string(v);
      }
    } else {
      os << " + ";
      if (c == Rational(1)) {
        os << to_string(v);
      } else {
        os << c.str() << '*' << to_string(v);
      }
    }
  }
  if (first) {
    os << constant_.str();
  } else if (!constant_.is_zero()) {
    if (constant_.sign() < 0) {
      os << " - " << constant_.abs().str();
    } else {
      os << " + " << constant_.str();
    }
  }
  return os.str();
}

AffineExpr affine_substitute(const AffineExpr& target, const std::map<VarId, AffineExpr>& bindings) {
  AffineExpr out(target.constant());
  for (const auto& [v, c] : target.terms()) {
    auto it = bindings.find(v);
    if (it == bindings.end()) {
      out.add_term(v, c);
    } else {
      out += it->second * c;
    }
  }
  return out;
}

Rational affine_evaluate(const AffineExpr& expr, const std::map<VarId, Rational>& assignment) {
  Rational value = expr.constant();
  for (const auto& [v, c] : expr.terms()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw MissingVariable("unassigned variable " + to_string(v));
    value += c * it->second;
  }
  return value;
}

std::set<VarId> AffineMap::input_universe() const {
  std::set<VarId> vars;
  for (const auto& e : outputs) {
    for (const auto& [v, c] : e.terms()) vars.insert(v);
  }
  return vars;
}

}  // namespace netinv
