// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/polyhedra.hpp"

#include <algorithm>
#include <cassert>

#include "netinv/errors.hpp"

namespace netinv {

void InequalitySystem::add(LinearConstraint c) {
  for (const auto& [v, coeff] : c.expr.terms()) universe_.insert(v);
  constraints_.push_back(std::move(c));
}

namespace {

// Working constraint with Farkas provenance: a nonnegative combination of
// the original constraints of the system being solved.
struct Tracked {
  AffineExpr expr;
  Sense sense = Sense::Ge;
  std::map<std::size_t, Rational> comb;

  bool is_ground() const { return expr.is_constant(); }
  bool ground_satisfied() const {
    return sense == Sense::Ge ? expr.constant().sign() >= 0 : expr.constant().sign() > 0;
  }
};

std::vector<Tracked> track(const InequalitySystem& system) {
  std::vector<Tracked> out;
  out.reserve(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto& c = system.constraints()[i];
    Tracked t{c.expr, c.sense, {}};
    t.comb.emplace(i, Rational(1));
    out.push_back(std::move(t));
  }
  return out;
}

Tracked scale(const Tracked& t, const Rational& factor) {
  Tracked out{t.expr * factor, t.sense, {}};
  for (const auto& [i, w] : t.comb) out.comb.emplace(i, w * factor);
  return out;
}

Tracked combine(const Tracked& a, const Tracked& b) {
  Tracked out{a.expr + b.expr, (a.sense == Sense::Gt || b.sense == Sense::Gt) ? Sense::Gt : Sense::Ge, a.comb};
  for (const auto& [i, w] : b.comb) {
    auto [it, inserted] = out.comb.emplace(i, w);
    if (!inserted) it->second += w;
  }
  return out;
}

// Keeps the strongest constraint per coefficient signature: lower constant
// binds harder, strict beats non-strict at equal constants. Ground
// constraints share the empty signature, so a violated one (the strongest)
// survives for the ground check.
void deduplicate(std::vector<Tracked>& constraints) {
  std::map<std::map<VarId, Rational>, std::size_t> best;
  std::vector<Tracked> kept;
  kept.reserve(constraints.size());
  for (auto& t : constraints) {
    auto it = best.find(t.expr.terms());
    if (it == best.end()) {
      best.emplace(t.expr.terms(), kept.size());
      kept.push_back(std::move(t));
      continue;
    }
    Tracked& held = kept[it->second];
    const Rational& c_new = t.expr.constant();
    const Rational& c_old = held.expr.constant();
    const bool stronger = c_new < c_old || (c_new == c_old && t.sense == Sense::Gt && held.sense == Sense::Ge);
    if (stronger) held = std::move(t);
  }
  constraints = std::move(kept);
}

std::vector<Tracked> eliminate_tracked(const std::vector<Tracked>& working, const VarId& var, bool dedup) {
  std::vector<const Tracked*> plus, minus;
  std::vector<Tracked> out;
  for (const auto& t : working) {
    const Rational c = t.expr.coeff(var);
    if (c.sign() > 0) {
      plus.push_back(&t);
    } else if (c.sign() < 0) {
      minus.push_back(&t);
    } else {
      out.push_back(t);
    }
  }
  for (const Tracked* p : plus) {
    const Tracked p_norm = scale(*p, Rational(1) / p->expr.coeff(var));
    for (const Tracked* m : minus) {
      const Tracked m_norm = scale(*m, Rational(1) / -m->expr.coeff(var));
      Tracked sum = combine(p_norm, m_norm);
      assert(!sum.expr.mentions(var));
      out.push_back(std::move(sum));
    }
  }
  if (dedup) deduplicate(out);
  return out;
}

const Tracked* find_violated_ground(const std::vector<Tracked>& working) {
  for (const auto& t : working) {
    if (t.is_ground() && !t.ground_satisfied()) return &t;
  }
  return nullptr;
}

Infeasible to_certificate(const Tracked& t) {
  return Infeasible{LinearConstraint{t.expr, t.sense}, t.comb};
}

// Greedy least-growth heuristic: eliminate the variable minimizing
// p*q - (p + q). Ties break on variable order.
VarId pick_elimination_var(const std::vector<Tracked>& working, const std::set<VarId>& pool) {
  VarId best_var = *pool.begin();
  bool have = false;
  long best_score = 0;
  for (const VarId& v : pool) {
    long p = 0, q = 0;
    for (const auto& t : working) {
      const int s = t.expr.coeff(v).sign();
      if (s > 0) ++p;
      else if (s < 0) ++q;
    }
    const long score = p * q - (p + q);
    if (!have || score < best_score) {
      have = true;
      best_score = score;
      best_var = v;
    }
  }
  return best_var;
}

void note_peak(FmStats* stats, std::size_t n) {
  if (stats && n > stats->peak_constraints) stats->peak_constraints = n;
}

}  // namespace

InequalitySystem fm_eliminate(const InequalitySystem& system, const VarId& var, const FmOptions& options) {
  std::vector<Tracked> working = track(system);
  std::vector<Tracked> reduced = eliminate_tracked(working, var, options.deduplicate);
  InequalitySystem out;
  std::set<VarId> vars = system.universe();
  vars.erase(var);
  out.add_variables(vars);
  for (auto& t : reduced) out.add(LinearConstraint{std::move(t.expr), t.sense});
  return out;
}

std::variant<SolvedBounds, Infeasible> fm_solve(const InequalitySystem& system, const std::vector<VarId>& keep,
                                                FmStats* stats) {
  std::vector<Tracked> working = track(system);
  note_peak(stats, working.size());
  if (const Tracked* bad = find_violated_ground(working)) return to_certificate(*bad);

  std::set<VarId> keep_set(keep.begin(), keep.end());
  std::set<VarId> pool;
  for (const VarId& v : system.universe()) {
    if (!keep_set.count(v)) pool.insert(v);
  }

  while (!pool.empty()) {
    const VarId v = pick_elimination_var(working, pool);
    pool.erase(v);
    working = eliminate_tracked(working, v, true);
    note_peak(stats, working.size());
    if (const Tracked* bad = find_violated_ground(working)) return to_certificate(*bad);
  }

  SolvedBounds bounds;
  std::set<VarId> seen_keep;
  for (const VarId& v : keep) {
    if (!seen_keep.insert(v).second) continue;
    bounds.elimination_order.push_back(v);

    SolvedBounds::Entry entry;
    entry.var = v;
    for (const auto& t : working) {
      const Rational c = t.expr.coeff(v);
      if (c.is_zero()) continue;
      AffineExpr rest = t.expr;
      rest.add_term(v, -c);
      if (c.sign() > 0) {
        entry.lower.push_back({-(rest / c), t.sense == Sense::Gt});
      } else {
        entry.upper.push_back({rest / -c, t.sense == Sense::Gt});
      }
    }
    if (entry.lower.empty() && entry.upper.empty()) {
      bounds.unconstrained.insert(v);
    } else {
      bounds.entries.push_back(std::move(entry));
    }

    working = eliminate_tracked(working, v, true);
    note_peak(stats, working.size());
    if (const Tracked* bad = find_violated_ground(working)) return to_certificate(*bad);
  }
  return bounds;
}

std::variant<Feasible, Infeasible> feasibility(const InequalitySystem& system, FmStats* stats) {
  auto solved = fm_solve(system, {}, stats);
  if (auto* inf = std::get_if<Infeasible>(&solved)) return *inf;
  return Feasible{};
}

bool check_certificate(const InequalitySystem& system, const Infeasible& cert) {
  if (cert.multipliers.empty()) return false;
  AffineExpr comb;
  Sense sense = Sense::Ge;
  for (const auto& [idx, weight] : cert.multipliers) {
    if (idx >= system.size()) return false;
    if (weight.sign() <= 0) return false;
    const LinearConstraint& c = system.constraints()[idx];
    comb += c.expr * weight;
    if (c.sense == Sense::Gt) sense = Sense::Gt;
  }
  if (!comb.is_constant()) return false;
  if (comb != cert.violated.expr || sense != cert.violated.sense) return false;
  return sense == Sense::Ge ? comb.constant().sign() < 0 : comb.constant().sign() <= 0;
}

const SolvedBounds::Entry* SolvedBounds::find(const VarId& v) const {
  for (const auto& e : entries) {
    if (e.var == v) return &e;
  }
  return nullptr;
}

namespace {

struct Interval {
  bool has_lo = false, has_hi = false;
  Rational lo, hi;
  bool lo_strict = false, hi_strict = false;

  bool admits(const Rational& x) const {
    if (has_lo && (x < lo || (x == lo && lo_strict))) return false;
    if (has_hi && (x > hi || (x == hi && hi_strict))) return false;
    return true;
  }
  bool empty() const { return has_lo && has_hi && (lo > hi || (lo == hi && (lo_strict || hi_strict))); }
};

Interval evaluate_interval(const SolvedBounds::Entry& entry, const std::map<VarId, Rational>& assignment) {
  Interval iv;
  for (const auto& b : entry.lower) {
    const Rational v = affine_evaluate(b.expr, assignment);
    if (!iv.has_lo || v > iv.lo) {
      iv.has_lo = true;
      iv.lo = v;
      iv.lo_strict = b.strict;
    } else if (v == iv.lo && b.strict) {
      iv.lo_strict = true;
    }
  }
  for (const auto& b : entry.upper) {
    const Rational v = affine_evaluate(b.expr, assignment);
    if (!iv.has_hi || v < iv.hi) {
      iv.has_hi = true;
      iv.hi = v;
      iv.hi_strict = b.strict;
    } else if (v == iv.hi && b.strict) {
      iv.hi_strict = true;
    }
  }
  return iv;
}

}  // namespace

std::optional<std::map<VarId, Rational>> sample_point(const SolvedBounds& bounds,
                                                      const std::map<VarId, Rational>& hints) {
  std::map<VarId, Rational> assignment;
  for (auto it = bounds.elimination_order.rbegin(); it != bounds.elimination_order.rend(); ++it) {
    const VarId& v = *it;
    const auto hint_it = hints.find(v);
    const SolvedBounds::Entry* entry = bounds.find(v);
    if (!entry) {
      assignment.emplace(v, hint_it != hints.end() ? hint_it->second : Rational(0));
      continue;
    }
    const Interval iv = evaluate_interval(*entry, assignment);
    if (iv.empty()) return std::nullopt;
    Rational value;
    if (hint_it != hints.end() && iv.admits(hint_it->second)) {
      value = hint_it->second;
    } else if (iv.has_lo && iv.has_hi) {
      value = (iv.lo + iv.hi) / Rational(2);
      if (!iv.admits(value)) return std::nullopt;  // degenerate strict point interval
    } else if (iv.has_lo) {
      value = iv.lo + Rational(1);
    } else if (iv.has_hi) {
      value = iv.hi - Rational(1);
    } else {
      value = hint_it != hints.end() ? hint_it->second : Rational(0);
    }
    assignment.emplace(v, std::move(value));
  }
  return assignment;
}

}  // namespace netinv
