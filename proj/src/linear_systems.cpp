// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/linear_systems.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>

#include "netinv/errors.hpp"

namespace netinv {

namespace {

struct Echelon {
  Mat a;
  std::vector<AffineExpr> rhs;
  std::vector<std::size_t> pivot_cols;  // pivot_cols[r] = column pivoted at row r
  std::size_t rank = 0;
  bool complete = true;  // no nonzero entry left below the pivoted rows
};

// Forward elimination. Pivot candidates are searched in `candidates` order;
// within the chosen column the pivot row maximizes |value| (ties: lowest
// row). With column_exchange a candidate column that is zero below the
// frontier is skipped; without it the stall ends elimination.
Echelon forward_eliminate(Mat a, std::vector<AffineExpr> rhs, const std::vector<std::size_t>& candidates,
                          bool column_exchange) {
  const std::size_t m = a.rows();
  Echelon e{std::move(a), std::move(rhs), {}, 0, true};
  std::vector<std::size_t> remaining = candidates;

  while (e.rank < m) {
    const std::size_t r = e.rank;
    std::optional<std::size_t> chosen;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      const std::size_t c = remaining[k];
      bool nonzero = false;
      for (std::size_t i = r; i < m && !nonzero; ++i) nonzero = !e.a.at(i, c).is_zero();
      if (nonzero) {
        chosen = k;
        break;
      }
      if (!column_exchange) break;  // fixed order: a stalled column ends the run
    }
    if (!chosen) break;
    const std::size_t col = remaining[*chosen];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*chosen));

    std::size_t pivot_row = r;
    Rational best = e.a.at(r, col).abs();
    for (std::size_t i = r + 1; i < m; ++i) {
      Rational cand = e.a.at(i, col).abs();
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (pivot_row != r) {
      for (std::size_t j = 0; j < e.a.cols(); ++j) std::swap(e.a.at(r, j), e.a.at(pivot_row, j));
      std::swap(e.rhs[r], e.rhs[pivot_row]);
    }
    const Rational pivot = e.a.at(r, col);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (e.a.at(i, col).is_zero()) continue;
      const Rational factor = e.a.at(i, col) / pivot;
      for (std::size_t j = 0; j < e.a.cols(); ++j) e.a.at(i, j) -= factor * e.a.at(r, j);
      e.rhs[i] -= e.rhs[r] * factor;
    }
    e.pivot_cols.push_back(col);
    ++e.rank;
  }

  // Anything nonzero below the frontier means the run stalled (possible
  // only without column exchange).
  for (std::size_t i = e.rank; i < m && e.complete; ++i)
    for (std::size_t j = 0; j < e.a.cols() && e.complete; ++j)
      if (!e.a.at(i, j).is_zero()) e.complete = false;

  return e;
}

// Back substitution: non-pivot columns take their representative
// expressions, pivot columns are solved bottom up.
std::vector<AffineExpr> back_substitute(const Echelon& e, const std::vector<AffineExpr>& reps) {
  const std::size_t k = e.a.cols();
  std::vector<AffineExpr> sol(reps.begin(), reps.end());
  std::vector<bool> pivoted(k, false);
  for (std::size_t c : e.pivot_cols) pivoted[c] = true;
  for (std::size_t step = e.rank; step-- > 0;) {
    const std::size_t c = e.pivot_cols[step];
    AffineExpr expr = e.rhs[step];
    for (std::size_t j = 0; j < k; ++j) {
      if (j == c || e.a.at(step, j).is_zero()) continue;
      expr -= sol[j] * e.a.at(step, j);
    }
    expr /= e.a.at(step, c);
    sol[c] = std::move(expr);
  }
  return sol;
}

int promotion_rank(VarKind kind) {
  switch (kind) {
    case VarKind::Free:
      return 0;
    case VarKind::Slack:
      return 1;
    case VarKind::Output:
      return 2;
    case VarKind::Input:
      return 3;
  }
  return 3;
}

}  // namespace

std::vector<VarId> promotable_vars(const std::vector<AffineExpr>& rhs, const PromotionPolicy& policy) {
  std::set<VarId> seen;
  for (const auto& e : rhs)
    for (const auto& [v, c] : e.terms()) seen.insert(v);
  std::vector<VarId> out;
  for (const auto& v : seen) {
    if (v.kind == VarKind::Input) continue;
    if (v.kind == VarKind::Output && !policy.allow_output) continue;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const VarId& a, const VarId& b) {
    const int ra = promotion_rank(a.kind);
    const int rb = promotion_rank(b.kind);
    if (ra != rb) return ra < rb;
    if (a.generation != b.generation) return a.generation < b.generation;
    return a.index < b.index;
  });
  return out;
}

GeneralSolution solve_general(const Mat& coeffs, std::vector<AffineExpr> rhs, VarFactory& vars,
                              std::uint32_t generation, const GeneralOptions& opts) {
  const std::size_t m = coeffs.rows();
  const std::size_t n = coeffs.cols();
  if (rhs.size() != m) throw Error("right member count does not match row count");
  const std::size_t e_cols = opts.promotable.size();

  // Extended matrix [W | -C]: promoted variables move to the unknown side,
  // their terms stripped from the right members.
  Mat ext(m, n + e_cols);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) ext.at(i, j) = coeffs.at(i, j);
  for (std::size_t k = 0; k < e_cols; ++k) {
    const VarId& v = opts.promotable[k];
    for (std::size_t i = 0; i < m; ++i) {
      Rational c = rhs[i].coeff(v);
      if (c.is_zero()) continue;
      ext.at(i, n + k) = -c;
      rhs[i].add_term(v, -c);
    }
  }

  std::vector<std::size_t> candidates;
  if (opts.pivot.column_exchange) {
    candidates.reserve(n + e_cols);
    for (std::size_t j = 0; j < n + e_cols; ++j) candidates.push_back(j);
  } else {
    // Fixed split: only the leading input block may pivot.
    for (std::size_t j = 0; j < std::min(m, n); ++j) candidates.push_back(j);
  }

  Echelon ech = forward_eliminate(std::move(ext), std::move(rhs), candidates, opts.pivot.column_exchange);

  GeneralSolution out;
  out.complete = ech.complete;

  std::vector<bool> pivoted(n + e_cols, false);
  for (std::size_t c : ech.pivot_cols) pivoted[c] = true;

  // Representatives: unpivoted inputs become fresh Free variables (in
  // ascending column order); unpivoted promoted variables stay themselves.
  std::vector<AffineExpr> reps(n + e_cols);
  for (std::size_t j = 0; j < n; ++j) {
    if (pivoted[j]) continue;
    VarId fresh = vars.fresh(VarKind::Free, generation);
    out.fresh_vars.push_back(fresh);
    out.free_columns.push_back(j);
    reps[j] = AffineExpr::variable(fresh);
  }
  for (std::size_t k = 0; k < e_cols; ++k) {
    if (!pivoted[n + k]) reps[n + k] = AffineExpr::variable(opts.promotable[k]);
  }

  std::vector<AffineExpr> sol = back_substitute(ech, reps);
  out.map.outputs.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t k = 0; k < e_cols; ++k) {
    if (pivoted[n + k]) out.pinned.emplace_back(opts.promotable[k], sol[n + k]);
  }
  for (std::size_t i = ech.rank; i < m; ++i) out.residuals.push_back(ech.rhs[i]);
  return out;
}

GaussResult gauss_solve(const LinearSystem& system) {
  const std::size_t m = system.coeffs.rows();
  const std::size_t n = system.coeffs.cols();
  if (m != n) throw NonSquare("gauss_solve requires a square system");
  VarFactory scratch;  // full-rank solves mint nothing; deficient ones discard the map
  GeneralSolution g = solve_general(system.coeffs, system.rhs, scratch, 0, GeneralOptions{});
  if (g.free_columns.empty()) return GaussSolved{std::move(g.map)};
  for (const auto& r : g.residuals) {
    if (r.is_constant() && !r.constant().is_zero()) return GaussInconsistent{r};
  }
  return GaussRankDeficient{std::move(g.free_columns), std::move(g.residuals)};
}

WideSolution solve_wide(const Mat& coeffs, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                        std::uint32_t generation, const PivotPolicy& policy) {
  const std::size_t m = coeffs.rows();
  const std::size_t n = coeffs.cols();
  if (n <= m) throw NonWide("solve_wide requires strictly more columns than rows");
  GeneralOptions opts;
  opts.pivot = policy;
  GeneralSolution g = solve_general(coeffs, rhs, vars, generation, opts);
  if (g.free_columns.size() != n - m || !g.residuals.empty() || !g.complete) {
    throw RankDeficientAllPivots(policy.column_exchange
                                     ? "no invertible M x M column subset exists"
                                     : "leading M x M block is singular and column pivoting is disabled");
  }
  return WideSolution{std::move(g.map), std::move(g.free_columns), std::move(g.fresh_vars)};
}

TallSolution solve_tall(const Mat& coeffs, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                        std::uint32_t generation, const PromotionPolicy& policy) {
  const std::size_t m = coeffs.rows();
  const std::size_t n = coeffs.cols();
  if (m <= n) throw NonTall("solve_tall requires strictly more rows than columns");
  GeneralOptions opts;
  opts.promotable = promotable_vars(rhs, policy);
  if (opts.promotable.size() < m - n) {
    throw InsufficientFreeVariables("tall system needs " + std::to_string(m - n) +
                                    " eliminable free variables, right members carry " +
                                    std::to_string(opts.promotable.size()));
  }
  GeneralSolution g = solve_general(coeffs, rhs, vars, generation, opts);
  return TallSolution{std::move(g.map), std::move(g.pinned), std::move(g.residuals), std::move(g.fresh_vars)};
}

AffineProjection project_affine(const Mat& coeffs, const std::vector<AffineExpr>& target) {
  const std::size_t m = coeffs.rows();
  const std::size_t n = coeffs.cols();
  if (m <= n) throw NonTall("projection requires strictly more rows than columns");
  if (target.size() != m) throw Error("target length does not match row count");

  // Normal equations: (W^T W) x = W^T t, exact in rationals.
  const Mat wt = coeffs.transposed();
  const Mat gram = wt * coeffs;
  std::vector<AffineExpr> gram_rhs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) gram_rhs[i] += target[j] * wt.at(i, j);

  GaussResult res = gauss_solve(LinearSystem{gram, std::move(gram_rhs)});
  auto* solved = std::get_if<GaussSolved>(&res);
  if (!solved) throw RankDeficientColumns("coefficient matrix lacks full column rank");

  AffineProjection out;
  out.solution = solved->map.outputs;
  out.projected_target.resize(m);
  out.residual.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    AffineExpr yi;
    for (std::size_t j = 0; j < n; ++j) yi += out.solution[j] * coeffs.at(i, j);
    out.residual[i] = yi - target[i];
    out.projected_target[i] = std::move(yi);
  }
  return out;
}

ProjectionResult least_squares_project(const Mat& coeffs, const std::vector<Rational>& target) {
  std::vector<AffineExpr> t;
  t.reserve(target.size());
  for (const auto& v : target) t.emplace_back(v);
  AffineProjection p = project_affine(coeffs, t);
  return ProjectionResult{std::move(p.projected_target), std::move(p.residual)};
}

}  // namespace netinv
