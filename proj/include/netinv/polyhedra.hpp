// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "netinv/affine.hpp"

namespace netinv {

enum class Sense : std::uint8_t { Ge, Gt };  // expr >= 0, expr > 0

/// One linear constraint, always stored with the left member >= 0 (or > 0);
/// inputs in <= / < form are negated on construction.
struct LinearConstraint {
  AffineExpr expr;
  Sense sense = Sense::Ge;

  static LinearConstraint ge0(AffineExpr e) { return {std::move(e), Sense::Ge}; }
  static LinearConstraint gt0(AffineExpr e) { return {std::move(e), Sense::Gt}; }
  static LinearConstraint le0(AffineExpr e) { return {-e, Sense::Ge}; }
  static LinearConstraint lt0(AffineExpr e) { return {-e, Sense::Gt}; }

  bool is_ground() const { return expr.is_constant(); }
  /// Truth of a ground constraint; precondition: is_ground().
  bool ground_satisfied() const {
    return sense == Sense::Ge ? expr.constant().sign() >= 0 : expr.constant().sign() > 0;
  }

  friend bool operator==(const LinearConstraint& a, const LinearConstraint& b) {
    return a.sense == b.sense && a.expr == b.expr;
  }
};

/// A polyhedral constraint system over an explicit variable universe. The
/// universe may list variables no constraint mentions (unconstrained).
class InequalitySystem {
 public:
  InequalitySystem() = default;

  void add(LinearConstraint c);
  void add_variable(const VarId& v) { universe_.insert(v); }
  void add_variables(const std::set<VarId>& vs) { universe_.insert(vs.begin(), vs.end()); }

  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::set<VarId>& universe() const { return universe_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }

 private:
  std::vector<LinearConstraint> constraints_;
  std::set<VarId> universe_;
};

struct Feasible {};

/// Refutation certificate: a nonnegative combination of the input
/// constraints whose left member is a ground constant that violates its
/// combined sense. Checkable without trusting the elimination.
struct Infeasible {
  LinearConstraint violated;                  // the ground constraint reached
  std::map<std::size_t, Rational> multipliers;  // input constraint index -> weight > 0
};

/// Recomputes the certificate combination from the original system and
/// confirms it is ground and violated. Independent of the solver path.
bool check_certificate(const InequalitySystem& system, const Infeasible& cert);

struct FmOptions {
  /// Syntactic deduplication and dominated-constant removal after the
  /// combination step. Off exposes the raw p*q + r growth law.
  bool deduplicate = true;
};

/// One Fourier-Motzkin step: projects the solution set onto the universe
/// minus `var`. Pairs every positive-coefficient constraint with every
/// negative one (normalized to coefficient +-1); constraints not mentioning
/// the variable pass through. Strict + anything = strict.
InequalitySystem fm_eliminate(const InequalitySystem& system, const VarId& var, const FmOptions& options = {});

/// Solved-form bounds for the kept variables, in back-substitutable order:
/// entry i's bound expressions reference only variables later in
/// elimination_order, or unconstrained variables.
struct SolvedBounds {
  struct Bound {
    AffineExpr expr;
    bool strict = false;
  };
  struct Entry {
    VarId var;
    std::vector<Bound> lower;  // var >= expr (or > when strict)
    std::vector<Bound> upper;  // var <= expr (or <)
  };
  std::vector<VarId> elimination_order;  // kept variables, in elimination order
  std::vector<Entry> entries;            // bounded kept variables only
  std::set<VarId> unconstrained;

  const Entry* find(const VarId& v) const;
};

struct FmStats {
  std::size_t peak_constraints = 0;
};

/// Eliminates all variables outside `keep` (greedy least-growth order),
/// then peels the kept variables one by one, recording each one's bound
/// sets before eliminating it. Any violated ground constraint surfaces as
/// Infeasible with its certificate.
std::variant<SolvedBounds, Infeasible> fm_solve(const InequalitySystem& system, const std::vector<VarId>& keep,
                                                FmStats* stats = nullptr);

/// Emptiness decision: fm_solve with nothing kept plus strictness-aware
/// ground checks.
std::variant<Feasible, Infeasible> feasibility(const InequalitySystem& system, FmStats* stats = nullptr);

/// Walks the elimination order in reverse assigning each variable a value
/// inside its evaluated interval: the hint when it fits, the midpoint when
/// boxed, one away from a single-sided bound, hint-or-zero when free.
/// Returns nullopt only when a hinted assignment empties an interval.
std::optional<std::map<VarId, Rational>> sample_point(const SolvedBounds& bounds,
                                                      const std::map<VarId, Rational>& hints = {});

}  // namespace netinv
