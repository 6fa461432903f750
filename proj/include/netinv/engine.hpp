// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netinv/linear_systems.hpp"
#include "netinv/network.hpp"
#include "netinv/polyhedra.hpp"

namespace netinv {

enum class Sign : std::uint8_t { NonPositive = 0, Positive = 1 };

/// One sign assignment for a piecewise layer: Positive units pass through,
/// NonPositive units take the scaled / clamped regime (boundary included).
struct SignPattern {
  std::uint32_t layer_index = 0;
  std::vector<Sign> bits;  // bits[i] is unit i

  static SignPattern from_mask(std::uint32_t layer_index, std::size_t width, std::uint64_t mask);
  /// Rendered most-significant-unit first, so masks 0..3 at width 2 read
  /// "00", "01", "10", "11".
  std::string bitmask() const;
};

/// Lazy bitmask-ordered enumeration of all 2^width patterns; callers may
/// stop early under a branch budget. Width zero is rejected upstream.
class SignPatternSequence {
 public:
  SignPatternSequence(std::uint32_t layer_index, std::size_t width);

  class iterator {
   public:
    iterator(std::uint32_t layer_index, std::size_t width, std::uint64_t mask)
        : layer_index_(layer_index), width_(width), mask_(mask) {}
    SignPattern operator*() const { return SignPattern::from_mask(layer_index_, width_, mask_); }
    iterator& operator++() {
      ++mask_;
      return *this;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.mask_ == b.mask_; }
    friend bool operator!=(const iterator& a, const iterator& b) { return !(a == b); }

   private:
    std::uint32_t layer_index_;
    std::size_t width_;
    std::uint64_t mask_;
  };

  iterator begin() const { return iterator(layer_index_, width_, 0); }
  iterator end() const { return iterator(layer_index_, width_, count()); }
  std::uint64_t count() const { return std::uint64_t{1} << width_; }

 private:
  std::uint32_t layer_index_;
  std::size_t width_;
};

SignPatternSequence enumerate_sign_patterns(std::uint32_t layer_index, std::size_t width);

/// One sign combination's contribution to the preimage: the affine input
/// map plus its validity polyhedron, with solved bounds once feasibility
/// has been certified.
struct SolutionBranch {
  std::vector<SignPattern> branch_id;  // one per piecewise layer, output side first
  AffineMap input_map;
  InequalitySystem constraints;
  std::optional<SolvedBounds> solved;

  std::string id() const;  // per-layer bitmasks joined with '.'
};

/// Recorded when an unreachable target was replaced by its least-squares
/// closest valid output at the output layer.
struct ProjectionNote {
  std::vector<Rational> projected_target;  // y-hat
  std::vector<Rational> residual;          // epsilon = y-hat - y
};

struct Preimage {
  std::optional<std::vector<Rational>> target;  // nullopt for symbolic runs
  std::vector<SolutionBranch> branches;         // feasible branches, bitmask order
  std::uint64_t enumerated_count = 0;
  std::uint64_t omega_bound = 1;
  bool partial = false;
  std::optional<ProjectionNote> projection;

  /// Target the branches actually map to: the projected one when present,
  /// null for symbolic runs.
  const std::vector<Rational>* effective_target() const {
    if (projection) return &projection->projected_target;
    return target ? &*target : nullptr;
  }
};

struct BranchBudget {
  std::optional<std::uint64_t> max_branches;  // cap on the materialized population
  bool strict = false;                        // throw BudgetExceeded instead of truncating
};

struct EngineOptions {
  bool symbolic = false;      // keep y as symbols; prune ground-false only
  bool eager_pruning = true;  // per-fork feasibility checks on concrete targets
  unsigned threads = 1;       // worker count; never affects results or order
  PivotPolicy pivot;
};

struct EngineStats {
  std::size_t peak_branch_constraints = 0;
  std::size_t peak_fm_constraints = 0;
  std::uint64_t feasibility_checks = 0;
};

/// Result of inverting one layer against the branch's current right
/// members. `pinned` lists promoted variables the solve fixed; their
/// bindings are already applied to `map` and `constraints`, the caller
/// applies them to previously accumulated state.
struct LayerInversion {
  AffineMap map;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<VarId, AffineExpr>> pinned;
  bool dead = false;
  std::string death_reason;
  std::optional<ProjectionNote> projection;
};

struct InvertContext {
  std::uint32_t generation = 0;  // network layer index
  bool symbolic = false;
  bool output_layer = false;  // enables least-squares routing for linear layers
  PivotPolicy pivot;
};

/// Identity / Linear layer inversion. Linear activation folds into the
/// weights and bias; shape dispatch: square Gauss, wide frees fresh tau,
/// tall promotes right-member free variables or projects at the output
/// layer.
LayerInversion invert_affine_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                                   const InvertContext& ctx);

/// PReLU inversion for one sign pattern: Positive units keep their target,
/// NonPositive units scale it by 1/alpha; the defining sign constraints are
/// emitted over the solved input expressions.
LayerInversion invert_prelu_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, const SignPattern& pattern,
                                  VarFactory& vars, const InvertContext& ctx);

/// ReLU inversion for one sign pattern: Positive units keep their target
/// (constrained > 0); NonPositive units consume a fresh nonpositive slack
/// and pin the consumed output expression to zero.
LayerInversion invert_relu_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, const SignPattern& pattern,
                                 VarFactory& vars, const InvertContext& ctx);

/// Full output-to-input walk: forks live branches over sign patterns at
/// each piecewise layer, accumulates constraints, prunes infeasible
/// branches, and assembles every feasible branch with its solved bounds.
Preimage compute_preimage(const Network& net, const std::vector<Rational>& target, const BranchBudget& budget = {},
                          const EngineOptions& options = {}, EngineStats* stats = nullptr);

/// Symbolic-target variant: y stays a vector of Output variables and only
/// ground-false constraints prune.
Preimage compute_preimage_symbolic(const Network& net, const BranchBudget& budget = {},
                                   const EngineOptions& options = {}, EngineStats* stats = nullptr);

/// Exact membership: does some assignment of the branch's free and slack
/// variables make the input map produce `candidate` under `target_bindings`
/// while every constraint holds?
bool branch_membership(const SolutionBranch& branch, const std::map<VarId, Rational>& target_bindings,
                       const std::vector<Rational>& candidate);

}  // namespace netinv
