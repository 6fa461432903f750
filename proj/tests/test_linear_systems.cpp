// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "netinv/errors.hpp"
#include "netinv/generators.hpp"
#include "netinv/linear_systems.hpp"

using namespace netinv;

namespace {

const VarId kY0 = VarId::output(0);
const VarId kY1 = VarId::output(1);

AffineExpr yv(std::uint32_t i) { return AffineExpr::variable(VarId::output(i)); }

// Back-substitution identity: W * map must reproduce the right members
// symbolically, with any pinned variables replaced by their solutions.
void check_identity(const Mat& w, const std::vector<AffineExpr>& rhs, const AffineMap& map,
                    const std::vector<std::pair<VarId, AffineExpr>>& pinned = {}) {
  std::map<VarId, AffineExpr> bindings;
  for (const auto& [v, e] : pinned) bindings.emplace(v, e);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    AffineExpr lhs;
    for (std::size_t j = 0; j < w.cols(); ++j) lhs += map.outputs[j] * w.at(i, j);
    CHECK(lhs == affine_substitute(rhs[i], bindings));
  }
}

Rational sq_norm(const std::vector<Rational>& v) {
  Rational out(0);
  for (const auto& x : v) out += x * x;
  return out;
}

// One-variable least-squares oracle: minimizes sum (w_i x - t_i)^2 by
// coarse grid search refined around the incumbent. Independent of the
// normal-equations path it is checking.
Rational grid_minimize_1d(const std::vector<Rational>& w, const std::vector<Rational>& t) {
  Rational best_x(0);
  Rational lo(-8), hi(8), step(1, 2);
  for (int round = 0; round < 6; ++round) {
    bool first = true;
    Rational best_err(0);
    for (Rational x = lo; x <= hi; x += step) {
      Rational err(0);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const Rational d = w[i] * x - t[i];
        err += d * d;
      }
      if (first || err < best_err) {
        first = false;
        best_err = err;
        best_x = x;
      }
    }
    lo = best_x - step;
    hi = best_x + step;
    step /= Rational(4);
  }
  return best_x;
}

}  // namespace

TEST_CASE("gauss_solve: identity system") {
  Mat w = Mat::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  std::vector<AffineExpr> rhs{yv(0) - AffineExpr(Rational(1)), yv(1) - AffineExpr(Rational(2))};
  auto res = gauss_solve({w, rhs});
  auto* solved = std::get_if<GaussSolved>(&res);
  REQUIRE(solved);
  CHECK(solved->map.outputs[0] == rhs[0]);
  CHECK(solved->map.outputs[1] == rhs[1]);
}

TEST_CASE("gauss_solve: mixing system solved symbolically") {
  Mat w = Mat::from_rows({{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}});
  std::vector<AffineExpr> rhs{yv(0), yv(1)};
  auto res = gauss_solve({w, rhs});
  auto* solved = std::get_if<GaussSolved>(&res);
  REQUIRE(solved);
  // x0 = y0/2 + y1/2, x1 = y0/2 - y1/2
  CHECK(solved->map.outputs[0].coeff(kY0) == Rational(1, 2));
  CHECK(solved->map.outputs[0].coeff(kY1) == Rational(1, 2));
  CHECK(solved->map.outputs[1].coeff(kY0) == Rational(1, 2));
  CHECK(solved->map.outputs[1].coeff(kY1) == Rational(-1, 2));
  check_identity(w, rhs, solved->map);
}

TEST_CASE("gauss_solve: dependent rows") {
  Mat w = Mat::from_rows({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}});

  SUBCASE("symbolic right members stay rank deficient") {
    auto res = gauss_solve({w, {yv(0), yv(1)}});
    auto* deficient = std::get_if<GaussRankDeficient>(&res);
    REQUIRE(deficient);
    CHECK(deficient->free_columns == std::vector<std::size_t>{1});
    REQUIRE(deficient->residuals.size() == 1);
    // the residual (up to row scaling) is the consistency requirement
    // 2 y0 = y1: it vanishes exactly on that subspace
    const AffineExpr& r = deficient->residuals[0];
    CHECK(!r.is_constant());
    CHECK(affine_evaluate(r, {{kY0, Rational(1)}, {kY1, Rational(2)}}) == Rational(0));
    CHECK(affine_evaluate(r, {{kY0, Rational(1)}, {kY1, Rational(3)}}) != Rational(0));
  }

  SUBCASE("constant contradiction is inconsistent") {
    auto res = gauss_solve({w, {AffineExpr(Rational(1)), AffineExpr(Rational(3))}});
    CHECK(std::holds_alternative<GaussInconsistent>(res));
  }

  SUBCASE("consistent constants are rank deficient") {
    auto res = gauss_solve({w, {AffineExpr(Rational(1)), AffineExpr(Rational(2))}});
    CHECK(std::holds_alternative<GaussRankDeficient>(res));
  }
}

TEST_CASE("gauss_solve: non-square is rejected") {
  Mat w = Mat::from_rows({{Rational(1), Rational(1)}});
  CHECK_THROWS_AS(gauss_solve({w, {yv(0)}}), NonSquare);
}

TEST_CASE("solve_wide: already-solved row frees the rest") {
  Mat w = Mat::from_rows({{Rational(1), Rational(0), Rational(0)}});
  VarFactory vars;
  auto sol = solve_wide(w, {yv(0)}, vars, 0);
  CHECK(sol.map.outputs[0] == yv(0));
  REQUIRE(sol.fresh_vars.size() == 2);
  CHECK(sol.map.outputs[1] == AffineExpr::variable(sol.fresh_vars[0]));
  CHECK(sol.map.outputs[2] == AffineExpr::variable(sol.fresh_vars[1]));
  CHECK(sol.free_columns == std::vector<std::size_t>{1, 2});
}

TEST_CASE("solve_wide: one equation, two unknowns") {
  Mat w = Mat::from_rows({{Rational(1), Rational(1)}});
  std::vector<AffineExpr> rhs{yv(0) - AffineExpr(Rational(1))};
  VarFactory vars;
  auto sol = solve_wide(w, rhs, vars, 0);
  REQUIRE(sol.fresh_vars.size() == 1);
  const VarId tau = sol.fresh_vars[0];
  CHECK(sol.map.outputs[1] == AffineExpr::variable(tau));
  CHECK(sol.map.outputs[0] == rhs[0] - AffineExpr::variable(tau));
  check_identity(w, rhs, sol.map);
}

TEST_CASE("solve_wide: square call is rejected") {
  Mat w = Mat::from_rows({{Rational(2), Rational(4)}, {Rational(1), Rational(2)}});
  VarFactory vars;
  CHECK_THROWS_AS(solve_wide(w, {yv(0), yv(1)}, vars, 0), NonWide);
}

TEST_CASE("solve_wide: paper split without column exchange needs invertible leading block") {
  Mat w = Mat::from_rows({{Rational(0), Rational(1), Rational(1)}, {Rational(0), Rational(1), Rational(-1)}});
  VarFactory vars;
  PivotPolicy fixed{false};
  CHECK_THROWS_AS(solve_wide(w, {yv(0), yv(1)}, vars, 0, fixed), RankDeficientAllPivots);
  // Column exchange handles the same matrix.
  auto sol = solve_wide(w, {yv(0), yv(1)}, vars, 0);
  check_identity(w, {yv(0), yv(1)}, sol.map);
}

TEST_CASE("property: solve_wide frees exactly N - M columns and satisfies the system") {
  DetRng rng(404);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t n = m + static_cast<std::size_t>(rng.uniform(1, 3));
    Mat w(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) w.at(i, j) = rng.rational(-5, 5, 3);
    std::vector<AffineExpr> rhs;
    for (std::size_t i = 0; i < m; ++i) rhs.push_back(yv(static_cast<std::uint32_t>(i)));
    VarFactory vars;
    try {
      auto sol = solve_wide(w, rhs, vars, 0);
      CHECK(sol.fresh_vars.size() == n - m);
      check_identity(w, rhs, sol.map);
    } catch (const RankDeficientAllPivots&) {
      // random rows can be dependent; that outcome is contractually valid
    }
  }
}

TEST_CASE("solve_tall: promoted variable pinned to zero") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(0)}});
  const VarId tau = VarId::free_var(0, 0);
  std::vector<AffineExpr> rhs{yv(0), AffineExpr::variable(tau)};
  VarFactory vars;
  auto sol = solve_tall(w, rhs, vars, 1);
  CHECK(sol.map.outputs[0] == yv(0));
  REQUIRE(sol.pinned.size() == 1);
  CHECK(sol.pinned[0].first == tau);
  CHECK(sol.pinned[0].second.is_zero());
  check_identity(w, rhs, sol.map, sol.pinned);
}

TEST_CASE("solve_tall: no free variables available") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(0)}});
  VarFactory vars;
  CHECK_THROWS_AS(solve_tall(w, {yv(0), yv(1)}, vars, 1), InsufficientFreeVariables);
}

TEST_CASE("solve_tall: promoted variable tracks the output") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(1)}});
  const VarId tau = VarId::free_var(0, 0);
  std::vector<AffineExpr> rhs{yv(0), AffineExpr::variable(tau)};
  VarFactory vars;
  auto sol = solve_tall(w, rhs, vars, 1);
  CHECK(sol.map.outputs[0] == yv(0));
  REQUIRE(sol.pinned.size() == 1);
  CHECK(sol.pinned[0].second == yv(0));
  check_identity(w, rhs, sol.map, sol.pinned);
}

TEST_CASE("property: solve_tall consumes exactly M - N free variables") {
  DetRng rng(905);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 2));
    const std::size_t m = n + static_cast<std::size_t>(rng.uniform(1, 2));
    Mat w(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) w.at(i, j) = rng.rational(-5, 5, 3);
    std::vector<AffineExpr> rhs;
    for (std::size_t i = 0; i < m; ++i) {
      AffineExpr e = yv(static_cast<std::uint32_t>(i));
      e += AffineExpr::variable(VarId::free_var(0, static_cast<std::uint32_t>(i)), rng.rational(1, 4, 2));
      rhs.push_back(std::move(e));
    }
    VarFactory vars;
    auto sol = solve_tall(w, rhs, vars, 1);
    if (sol.residuals.empty() && sol.fresh_vars.empty()) {
      CHECK(sol.pinned.size() == m - n);
    }
    check_identity(w, rhs, sol.map, sol.pinned);
  }
}

TEST_CASE("least_squares_project: target already in the column space") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(1)}});
  auto proj = least_squares_project(w, {Rational(2), Rational(2)});
  CHECK(proj.residual[0].is_zero());
  CHECK(proj.residual[1].is_zero());
  CHECK(proj.projected_target[0] == AffineExpr(Rational(2)));
}

TEST_CASE("least_squares_project: balanced split, checked by a grid oracle") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(1)}});
  auto proj = least_squares_project(w, {Rational(0), Rational(2)});
  CHECK(proj.projected_target[0] == AffineExpr(Rational(1)));
  CHECK(proj.projected_target[1] == AffineExpr(Rational(1)));
  CHECK(proj.residual[0] == AffineExpr(Rational(1)));
  CHECK(proj.residual[1] == AffineExpr(Rational(-1)));

  // independent one-variable oracle: minimize (x-0)^2 + (x-2)^2
  CHECK(grid_minimize_1d({Rational(1), Rational(1)}, {Rational(0), Rational(2)}) == Rational(1));
}

TEST_CASE("least_squares_project: unreachable row absorbs the error") {
  Mat w = Mat::from_rows({{Rational(1)}, {Rational(0)}});
  auto proj = least_squares_project(w, {Rational(3), Rational(5)});
  CHECK(proj.projected_target[0] == AffineExpr(Rational(3)));
  CHECK(proj.projected_target[1] == AffineExpr(Rational(0)));
  CHECK(proj.residual[0].is_zero());
  CHECK(proj.residual[1] == AffineExpr(Rational(-5)));
  CHECK(grid_minimize_1d({Rational(1), Rational(0)}, {Rational(3), Rational(5)}) == Rational(3));
}

TEST_CASE("least_squares_project: rank-deficient columns are rejected") {
  Mat w = Mat::from_rows({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}, {Rational(3), Rational(3)}});
  CHECK_THROWS_AS(least_squares_project(w, {Rational(1), Rational(1), Rational(1)}), RankDeficientColumns);
}

TEST_CASE("property: projection orthogonality, idempotence, minimality") {
  DetRng rng(777);
  int done = 0;
  while (done < 40) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t m = n + static_cast<std::size_t>(rng.uniform(1, 4 - static_cast<long>(n)));
    Mat w(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) w.at(i, j) = rng.rational(-4, 4, 3);
    std::vector<Rational> target;
    for (std::size_t i = 0; i < m; ++i) target.push_back(rng.rational(-6, 6, 3));

    ProjectionResult proj;
    try {
      proj = least_squares_project(w, target);
    } catch (const RankDeficientColumns&) {
      continue;
    }
    ++done;

    std::vector<Rational> eps, yhat;
    for (std::size_t i = 0; i < m; ++i) {
      eps.push_back(proj.residual[i].constant());
      yhat.push_back(proj.projected_target[i].constant());
    }
    // W^T eps = 0 exactly
    const Mat wt = w.transposed();
    for (std::size_t i = 0; i < n; ++i) {
      Rational dot(0);
      for (std::size_t j = 0; j < m; ++j) dot += wt.at(i, j) * eps[j];
      CHECK(dot == Rational(0));
    }
    // projecting y-hat again is a no-op
    auto again = least_squares_project(w, yhat);
    for (std::size_t i = 0; i < m; ++i) CHECK(again.residual[i].is_zero());

    // minimality against feasible perturbations around the projection
    const Rational base = sq_norm(eps);
    for (int k = 0; k < 50; ++k) {
      std::vector<Rational> delta;
      for (std::size_t j = 0; j < n; ++j) delta.push_back(rng.rational(-3, 3, 3));
      std::vector<Rational> perturbed(m);
      for (std::size_t i = 0; i < m; ++i) {
        perturbed[i] = yhat[i] - target[i];
        for (std::size_t j = 0; j < n; ++j) perturbed[i] += w.at(i, j) * delta[j];
      }
      CHECK(base <= sq_norm(perturbed));
    }
  }
}
