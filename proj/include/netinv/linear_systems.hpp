// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "netinv/affine.hpp"
#include "netinv/matrix.hpp"

namespace netinv {

/// M equations over N implicit column unknowns with symbolic right members.
/// Right-member variables are parameters, disjoint from the unknowns.
struct LinearSystem {
  Mat coeffs;
  std::vector<AffineExpr> rhs;
};

struct GaussSolved {
  AffineMap map;  // unknown j = map.outputs[j]
};
struct GaussInconsistent {
  AffineExpr residual;  // a zero row's right member with nonzero constant
};
struct GaussRankDeficient {
  std::vector<std::size_t> free_columns;  // columns to promote to free variables
  std::vector<AffineExpr> residuals;      // zero-row right members (must vanish for consistency)
};
using GaussResult = std::variant<GaussSolved, GaussInconsistent, GaussRankDeficient>;

/// Symbolic Gaussian elimination on a square system. Partial pivoting by
/// largest absolute value (ties: lowest row, then lowest column); a pivot
/// column that is identically zero is exchanged for the next usable one.
GaussResult gauss_solve(const LinearSystem& system);

struct PivotPolicy {
  /// When false, pivot columns are fixed to the leading block in order,
  /// recovering the fixed "last inputs become free" split.
  bool column_exchange = true;
};

struct WideSolution {
  AffineMap map;                           // all N input components
  std::vector<std::size_t> free_columns;   // input indices that became free
  std::vector<VarId> fresh_vars;           // the minted tau, one per free column
};

/// Solves an M x N system with N > M by freeing N - M input columns as
/// fresh Free variables and expressing the pivoted inputs over
/// {right-member parameters} + {fresh frees}.
WideSolution solve_wide(const Mat& coeffs, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                        std::uint32_t generation, const PivotPolicy& policy = {});

struct PromotionPolicy {
  /// Output variables become promotion candidates only in symbolic-target
  /// runs (the multi-layer composition can pin reachable target components).
  bool allow_output = false;
};

/// Distinct right-member variables eligible for promotion to unknowns, in
/// promotion preference order: Free, then Slack, then (optionally) Output;
/// within a kind by (generation, index).
std::vector<VarId> promotable_vars(const std::vector<AffineExpr>& rhs, const PromotionPolicy& policy = {});

struct TallSolution {
  AffineMap map;                                     // all N input components
  std::vector<std::pair<VarId, AffineExpr>> pinned;  // promoted variables, solved
  std::vector<AffineExpr> residuals;                 // zero-row right members (must vanish)
  std::vector<VarId> fresh_vars;                     // minted only when an input column degenerates
};

/// Solves an M x N system with M > N by promoting M - N right-member free
/// variables to unknowns alongside the inputs. Throws
/// InsufficientFreeVariables when the right members carry fewer candidates.
TallSolution solve_tall(const Mat& coeffs, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                        std::uint32_t generation, const PromotionPolicy& policy = {});

struct ProjectionResult {
  std::vector<AffineExpr> projected_target;  // y-hat = target + residual
  std::vector<AffineExpr> residual;          // epsilon, orthogonal to the column space
};

/// Least-squares projection of an unreachable target onto the column space
/// of a tall full-column-rank matrix, by exact normal equations.
ProjectionResult least_squares_project(const Mat& coeffs, const std::vector<Rational>& target);

/// Symbolic variant used by the engine: targets may carry variables; the
/// projection is affine in them. Returns {solution x-hat, y-hat, epsilon}.
struct AffineProjection {
  std::vector<AffineExpr> solution;
  std::vector<AffineExpr> projected_target;
  std::vector<AffineExpr> residual;
};
AffineProjection project_affine(const Mat& coeffs, const std::vector<AffineExpr>& target);

/// Engine-facing eliminator handling every shape and crafted-singular
/// inputs deterministically. Promotion candidates are taken in order; input
/// columns are preferred as pivots. Unpivoted input columns get fresh Free
/// variables; unpivoted candidates stay as themselves.
struct GeneralOptions {
  PivotPolicy pivot;
  std::vector<VarId> promotable;
};
struct GeneralSolution {
  AffineMap map;                                     // one expression per input column
  std::vector<std::pair<VarId, AffineExpr>> pinned;  // pivoted promoted variables
  std::vector<AffineExpr> residuals;                 // zero-row right members (must equal 0)
  std::vector<VarId> fresh_vars;
  std::vector<std::size_t> free_columns;
  bool complete = true;  // false only when fixed-column pivoting stalls
};
GeneralSolution solve_general(const Mat& coeffs, std::vector<AffineExpr> rhs, VarFactory& vars,
                              std::uint32_t generation, const GeneralOptions& opts);

}  // namespace netinv
