// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "netinv/generators.hpp"
#include "netinv/oracle.hpp"
#include "netinv/polyhedra.hpp"

using namespace netinv;

namespace {

const VarId kX = VarId::free_var(0, 0);
const VarId kY = VarId::free_var(0, 1);

AffineExpr ax(const Rational& cx, const Rational& c) {
  AffineExpr e{c};
  e.add_term(kX, cx);
  return e;
}

AffineExpr axy(const Rational& cx, const Rational& cy, const Rational& c) {
  AffineExpr e{c};
  e.add_term(kX, cx);
  e.add_term(kY, cy);
  return e;
}

bool satisfies(const InequalitySystem& sys, const std::map<VarId, Rational>& point) {
  for (const auto& c : sys.constraints()) {
    const Rational v = affine_evaluate(c.expr, point);
    if (c.sense == Sense::Ge ? v.sign() < 0 : v.sign() <= 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("fm_eliminate: bounded interval becomes a tautology") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-1))));  // x - 1 >= 0
  sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(3))));  // 3 - x >= 0
  InequalitySystem out = fm_eliminate(sys, kX);
  REQUIRE(out.size() == 1);
  CHECK(out.constraints()[0].expr == AffineExpr(Rational(2)));
  CHECK(out.constraints()[0].ground_satisfied());
  CHECK(out.universe().count(kX) == 0);
}

TEST_CASE("fm_eliminate: contradiction surfaces as a negative constant") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-3))));  // x >= 3
  sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(1))));  // x <= 1
  InequalitySystem out = fm_eliminate(sys, kX);
  REQUIRE(out.size() == 1);
  CHECK(out.constraints()[0].expr == AffineExpr(Rational(-2)));
  CHECK(!out.constraints()[0].ground_satisfied());
}

TEST_CASE("fm_eliminate: projection against a 2-D grid oracle") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(axy(Rational(1), Rational(1), Rational(0))));    // x + y >= 0
  sys.add(LinearConstraint::ge0(axy(Rational(1), Rational(-1), Rational(0))));   // x - y >= 0
  sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(2))));                 // -x + 2 >= 0
  InequalitySystem out = fm_eliminate(sys, kX);
  CHECK(out.size() == 2);

  // oracle: exists x on a fine grid satisfying the input <=> projection holds
  for (Rational y(-3); y <= Rational(3); y += Rational(1, 4)) {
    bool input_feasible = false;
    for (Rational x(-4); x <= Rational(4) && !input_feasible; x += Rational(1, 4)) {
      input_feasible = satisfies(sys, {{kX, x}, {kY, y}});
    }
    CHECK(input_feasible == satisfies(out, {{kY, y}}));
  }
}

TEST_CASE("fm_eliminate: absent variable leaves the constraints unchanged") {
  InequalitySystem sys;
  sys.add(LinearConstraint::gt0(axy(Rational(0), Rational(2), Rational(1))));
  sys.add_variable(kX);
  InequalitySystem out = fm_eliminate(sys, kX);
  REQUIRE(out.size() == 1);
  CHECK(out.constraints()[0].expr == sys.constraints()[0].expr);
  CHECK(out.universe().count(kX) == 0);
}

TEST_CASE("fm_eliminate growth law: p*q + r constraints before deduplication") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(axy(Rational(1), Rational(1), Rational(0))));
  sys.add(LinearConstraint::ge0(axy(Rational(2), Rational(0), Rational(-1))));
  sys.add(LinearConstraint::ge0(axy(Rational(-1), Rational(2), Rational(5))));
  sys.add(LinearConstraint::ge0(axy(Rational(0), Rational(1), Rational(-1))));
  // p = 2, q = 1, r = 1
  FmOptions raw;
  raw.deduplicate = false;
  InequalitySystem out = fm_eliminate(sys, kX, raw);
  CHECK(out.size() == 2 * 1 + 1);
}

TEST_CASE("property: growth law on random systems") {
  DetRng rng(1234);
  for (int iter = 0; iter < 100; ++iter) {
    InequalitySystem sys = random_system(3, static_cast<std::size_t>(rng.uniform(1, 8)), rng);
    const VarId v = VarId::free_var(0, 0);
    std::size_t p = 0, q = 0, r = 0;
    for (const auto& c : sys.constraints()) {
      const int s = c.expr.coeff(v).sign();
      if (s > 0) ++p;
      else if (s < 0) ++q;
      else ++r;
    }
    FmOptions raw;
    raw.deduplicate = false;
    CHECK(fm_eliminate(sys, v, raw).size() == p * q + r);
  }
}

TEST_CASE("fm_solve: single lower bound") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(0))));  // x >= 0
  auto res = fm_solve(sys, {kX});
  auto* bounds = std::get_if<SolvedBounds>(&res);
  REQUIRE(bounds);
  const auto* entry = bounds->find(kX);
  REQUIRE(entry);
  REQUIRE(entry->lower.size() == 1);
  CHECK(entry->lower[0].expr.is_zero());
  CHECK(entry->upper.empty());
}

TEST_CASE("fm_solve: extrema evaluation matches integer enumeration") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-1))));   // x >= 1
  sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-2))));   // x >= 2
  sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(5))));   // x <= 5
  auto res = fm_solve(sys, {kX});
  auto* bounds = std::get_if<SolvedBounds>(&res);
  REQUIRE(bounds);
  const auto* entry = bounds->find(kX);
  REQUIRE(entry);
  CHECK(entry->lower.size() == 2);
  CHECK(entry->upper.size() == 1);

  // Eq-style max/min evaluation: max(1,2) <= x <= min(5)
  Rational lo = affine_evaluate(entry->lower[0].expr, {});
  for (const auto& b : entry->lower) lo = std::max(lo, affine_evaluate(b.expr, {}));
  Rational hi = affine_evaluate(entry->upper[0].expr, {});
  CHECK(lo == Rational(2));
  CHECK(hi == Rational(5));

  // independent oracle: integer candidates 0..6
  for (long v = 0; v <= 6; ++v) {
    const bool in_solved = Rational(v) >= lo && Rational(v) <= hi;
    const bool in_system = satisfies(sys, {{kX, Rational(v)}});
    CHECK(in_solved == in_system);
  }
}

TEST_CASE("fm_solve: infeasible pair yields a checkable certificate") {
  InequalitySystem sys;
  sys.add(LinearConstraint::ge0(axy(Rational(1), Rational(1), Rational(0))));     // x + y >= 0
  sys.add(LinearConstraint::ge0(axy(Rational(-1), Rational(-1), Rational(-1))));  // -x - y - 1 >= 0
  auto res = fm_solve(sys, {});
  auto* inf = std::get_if<Infeasible>(&res);
  REQUIRE(inf);
  CHECK(inf->violated.expr == AffineExpr(Rational(-1)));
  CHECK(check_certificate(sys, *inf));
}

TEST_CASE("feasibility: whole space and strict boundary interaction") {
  InequalitySystem empty;
  CHECK(std::holds_alternative<Feasible>(feasibility(empty)));

  InequalitySystem boundary;
  boundary.add(LinearConstraint::gt0(ax(Rational(1), Rational(0))));   // x > 0
  boundary.add(LinearConstraint::ge0(ax(Rational(-1), Rational(0))));  // -x >= 0
  auto res = feasibility(boundary);
  auto* inf = std::get_if<Infeasible>(&res);
  REQUIRE(inf);
  CHECK(inf->violated.sense == Sense::Gt);
  CHECK(inf->violated.expr.is_zero());
  CHECK(check_certificate(boundary, *inf));
}

TEST_CASE("property: feasibility agrees with the grid oracle, certificates always check") {
  DetRng rng(5150);
  const GridSpec box{Rational(-5), Rational(5), Rational(1, 2)};
  for (int iter = 0; iter < 60; ++iter) {
    InequalitySystem sys =
        random_system(static_cast<std::size_t>(rng.uniform(1, 3)), static_cast<std::size_t>(rng.uniform(1, 8)), rng);
    auto fm = feasibility(sys);
    auto oracle = feasibility_oracle(sys, box);
    if (auto* inf = std::get_if<Infeasible>(&fm)) {
      CHECK(check_certificate(sys, *inf));
      CHECK(std::holds_alternative<OracleProbablyInfeasible>(oracle));  // a witness would be a hard failure
    }
  }
}

TEST_CASE("property: projection soundness and completeness of one step") {
  DetRng rng(31337);
  const GridSpec box{Rational(-4), Rational(4), Rational(1, 2)};
  for (int iter = 0; iter < 40; ++iter) {
    // >=-only systems so boundary points extend (strict needs the interior)
    InequalitySystem sys;
    const std::size_t n_cons = static_cast<std::size_t>(rng.uniform(2, 6));
    for (std::size_t c = 0; c < n_cons; ++c) {
      AffineExpr e{rng.rational(-4, 4, 3)};
      e.add_term(kX, rng.rational(-3, 3, 2));
      e.add_term(kY, rng.rational(-3, 3, 2));
      sys.add(LinearConstraint::ge0(std::move(e)));
    }
    sys.add_variable(kX);
    sys.add_variable(kY);
    InequalitySystem projected = fm_eliminate(sys, kX);

    for (Rational y(-4); y <= Rational(4); y += Rational(1, 2)) {
      // completeness: each input-feasible point restricted to y satisfies the projection
      bool input_feasible = false;
      for (Rational x(-4); x <= Rational(4) && !input_feasible; x += Rational(1, 4)) {
        input_feasible = satisfies(sys, {{kX, x}, {kY, y}});
      }
      const bool projected_ok = satisfies(projected, {{kY, y}});
      if (input_feasible) CHECK(projected_ok);

      // soundness: points of the projection extend back to the input system
      if (projected_ok) {
        InequalitySystem slice;
        for (const auto& c : sys.constraints()) {
          AffineExpr e = affine_substitute(c.expr, {{kY, AffineExpr(y)}});
          slice.add(LinearConstraint{std::move(e), c.sense});
        }
        auto res = fm_solve(slice, {kX});
        auto* bounds = std::get_if<SolvedBounds>(&res);
        REQUIRE(bounds);
        auto point = sample_point(*bounds);
        REQUIRE(point.has_value());
        point->emplace(kY, y);
        CHECK(satisfies(sys, *point));
      }
    }
  }
}

TEST_CASE("sample_point: midpoint, one-sided, and strict policies") {
  SUBCASE("boxed interval takes the midpoint") {
    InequalitySystem sys;
    sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-2))));
    sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(5))));
    auto bounds = std::get<SolvedBounds>(fm_solve(sys, {kX}));
    auto point = sample_point(bounds);
    REQUIRE(point);
    CHECK(point->at(kX) == Rational(7, 2));
  }
  SUBCASE("only a lower bound steps one above it") {
    InequalitySystem sys;
    sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(-2))));
    auto bounds = std::get<SolvedBounds>(fm_solve(sys, {kX}));
    auto point = sample_point(bounds);
    REQUIRE(point);
    CHECK(point->at(kX) == Rational(3));
  }
  SUBCASE("open interval midpoint satisfies both strict bounds") {
    InequalitySystem sys;
    sys.add(LinearConstraint::gt0(ax(Rational(1), Rational(0))));
    sys.add(LinearConstraint::gt0(ax(Rational(-1), Rational(1))));
    auto bounds = std::get<SolvedBounds>(fm_solve(sys, {kX}));
    auto point = sample_point(bounds);
    REQUIRE(point);
    CHECK(point->at(kX) == Rational(1, 2));
    CHECK(point->at(kX) > Rational(0));
    CHECK(point->at(kX) < Rational(1));
  }
  SUBCASE("hints are honored inside and ignored outside") {
    InequalitySystem sys;
    sys.add(LinearConstraint::ge0(ax(Rational(1), Rational(0))));
    sys.add(LinearConstraint::ge0(ax(Rational(-1), Rational(4))));
    auto bounds = std::get<SolvedBounds>(fm_solve(sys, {kX}));
    auto inside = sample_point(bounds, {{kX, Rational(1, 3)}});
    REQUIRE(inside);
    CHECK(inside->at(kX) == Rational(1, 3));
    auto outside = sample_point(bounds, {{kX, Rational(9)}});
    REQUIRE(outside);
    CHECK(outside->at(kX) == Rational(2));
  }
  SUBCASE("adversarial hints cannot break a feasible system") {
    // FM already projected x <= 1 out of {y >= x, y <= 1}, so the hint 5
    // is rejected and the dependent interval stays solvable.
    InequalitySystem sys;
    sys.add(LinearConstraint::ge0(axy(Rational(-1), Rational(1), Rational(0))));  // y >= x
    sys.add(LinearConstraint::ge0(axy(Rational(0), Rational(-1), Rational(1))));  // y <= 1
    auto bounds = std::get<SolvedBounds>(fm_solve(sys, {kY, kX}));
    auto point = sample_point(bounds, {{kX, Rational(5)}, {kY, Rational(-9)}});
    REQUIRE(point.has_value());
    CHECK(satisfies(sys, *point));
  }
}

TEST_CASE("property: sampled points satisfy every original constraint") {
  DetRng rng(8080);
  int feasible_seen = 0;
  for (int iter = 0; iter < 80 && feasible_seen < 40; ++iter) {
    InequalitySystem sys =
        random_system(static_cast<std::size_t>(rng.uniform(1, 3)), static_cast<std::size_t>(rng.uniform(1, 6)), rng);
    std::vector<VarId> keep(sys.universe().begin(), sys.universe().end());
    auto res = fm_solve(sys, keep);
    auto* bounds = std::get_if<SolvedBounds>(&res);
    if (!bounds) continue;
    ++feasible_seen;
    auto point = sample_point(*bounds, {});
    REQUIRE(point);
    CHECK(satisfies(sys, *point));
    // hinted variant stays inside too
    std::map<VarId, Rational> hints;
    for (const VarId& v : keep) hints.emplace(v, rng.rational(-6, 6, 3));
    auto hinted = sample_point(*bounds, hints);
    if (hinted) CHECK(satisfies(sys, *hinted));
  }
  CHECK(feasible_seen >= 20);
}
