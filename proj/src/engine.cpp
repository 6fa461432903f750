// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/engine.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "netinv/errors.hpp"

namespace netinv {

SignPattern SignPattern::from_mask(std::uint32_t layer_index, std::size_t width, std::uint64_t mask) {
  SignPattern p;
  p.layer_index = layer_index;
  p.bits.resize(width);
  for (std::size_t i = 0; i < width; ++i) {
    p.bits[i] = ((mask >> i) & 1u) ? Sign::Positive : Sign::NonPositive;
  }
  return p;
}

std::string SignPattern::bitmask() const {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == Sign::Positive) s[bits.size() - 1 - i] = '1';
  }
  return s;
}

SignPatternSequence::SignPatternSequence(std::uint32_t layer_index, std::size_t width)
    : layer_index_(layer_index), width_(width) {
  if (width == 0) throw Error("zero-width piecewise layer cannot be enumerated");
  if (width > 62) throw Error("piecewise layer width exceeds the enumeration guard (62)");
}

SignPatternSequence enumerate_sign_patterns(std::uint32_t layer_index, std::size_t width) {
  return SignPatternSequence(layer_index, width);
}

std::string SolutionBranch::id() const {
  std::string out;
  for (std::size_t i = 0; i < branch_id.size(); ++i) {
    if (i) out.push_back('.');
    out += branch_id[i].bitmask();
  }
  return out;
}

namespace {

bool all_constant(const std::vector<AffineExpr>& exprs) {
  for (const auto& e : exprs) {
    if (!e.is_constant()) return false;
  }
  return true;
}

// Folds a Linear activation into the weight matrix and bias so the layer
// reads W'x = t - b' with the activation removed.
void fold_activation(const Layer& layer, Mat& w, std::vector<Rational>& b) {
  w = layer.weights;
  b = layer.biases;
  if (layer.activation.kind == Activation::Kind::Linear) {
    const Rational& alpha = layer.activation.alpha;
    const Rational& beta = layer.activation.beta;
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) w.at(i, j) *= alpha;
      b[i] = alpha * b[i] + beta;
    }
  }
}

void append_equality(LayerInversion& inv, const AffineExpr& expr) {
  if (expr.is_constant()) {
    if (!expr.constant().is_zero()) {
      inv.dead = true;
      inv.death_reason = "inconsistent equations: residual " + expr.str() + " must equal 0";
    }
    return;
  }
  inv.constraints.push_back(LinearConstraint::ge0(expr));
  inv.constraints.push_back(LinearConstraint::le0(expr));
}

// Core solve of W x = targets - b for every shape, with crafted-singular
// inputs handled deterministically: unpivoted input columns become fresh
// free variables, zero rows become equality requirements.
LayerInversion solve_layer_system(const Mat& w, const std::vector<Rational>& b,
                                  const std::vector<AffineExpr>& targets, VarFactory& vars,
                                  const InvertContext& ctx, bool allow_projection) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  std::vector<AffineExpr> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = targets[i] - AffineExpr(b[i]);

  LayerInversion inv;

  GeneralOptions opts;
  opts.pivot = ctx.pivot;
  if (m > n) {
    opts.promotable = promotable_vars(rhs, PromotionPolicy{ctx.symbolic});
    if (opts.promotable.size() < m - n && allow_projection && all_constant(rhs)) {
      // Unreachable target at the output layer: take the closest valid
      // output in the least-squares sense and solve against it.
      AffineProjection proj = project_affine(w, rhs);
      inv.map.outputs = std::move(proj.solution);
      ProjectionNote note;
      note.projected_target.reserve(m);
      note.residual.reserve(m);
      bool moved = false;
      for (std::size_t i = 0; i < m; ++i) {
        note.projected_target.push_back(proj.projected_target[i].constant() + b[i]);
        note.residual.push_back(proj.residual[i].constant());
        moved = moved || !note.residual.back().is_zero();
      }
      if (moved) inv.projection = std::move(note);  // a zero residual is an exact solve, not a projection
      return inv;
    }
  }

  GeneralSolution g = solve_general(w, std::move(rhs), vars, ctx.generation, opts);
  inv.map = std::move(g.map);
  inv.pinned = std::move(g.pinned);
  for (const auto& r : g.residuals) {
    append_equality(inv, r);
    if (inv.dead) return inv;
  }
  return inv;
}

// Pre-activation expressions of the layer under the solved input map.
std::vector<AffineExpr> preactivations(const Mat& w, const std::vector<Rational>& b, const AffineMap& map) {
  std::vector<AffineExpr> z(w.rows());
  for (std::size_t j = 0; j < w.rows(); ++j) {
    AffineExpr e{b[j]};
    for (std::size_t i = 0; i < w.cols(); ++i) e += map.outputs[i] * w.at(j, i);
    z[j] = std::move(e);
  }
  return z;
}

void push_sign_constraint(LayerInversion& inv, AffineExpr expr, Sign sign) {
  LinearConstraint c = sign == Sign::Positive ? LinearConstraint::gt0(std::move(expr))
                                              : LinearConstraint::le0(std::move(expr));
  if (c.is_ground()) {
    if (!c.ground_satisfied()) {
      inv.dead = true;
      inv.death_reason = "sign pattern contradicts a ground value";
    }
    return;
  }
  inv.constraints.push_back(std::move(c));
}

}  // namespace

LayerInversion invert_affine_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, VarFactory& vars,
                                   const InvertContext& ctx) {
  if (layer.activation.piecewise()) throw Error("invert_affine_layer requires an Identity or Linear activation");
  if (rhs.size() != layer.fan_out()) throw DimensionMismatch("right member count does not match layer width");
  Mat w;
  std::vector<Rational> b;
  fold_activation(layer, w, b);
  return solve_layer_system(w, b, rhs, vars, ctx, ctx.output_layer);
}

LayerInversion invert_prelu_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, const SignPattern& pattern,
                                  VarFactory& vars, const InvertContext& ctx) {
  if (layer.activation.kind != Activation::Kind::PReLU) throw Error("invert_prelu_layer requires a PReLU activation");
  if (rhs.size() != layer.fan_out() || pattern.bits.size() != layer.fan_out()) {
    throw DimensionMismatch("right member or pattern width does not match layer width");
  }
  const Rational& alpha = layer.activation.alpha;

  std::vector<AffineExpr> targets(rhs.size());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    targets[j] = pattern.bits[j] == Sign::Positive ? rhs[j] : rhs[j] / alpha;
  }
  LayerInversion inv = solve_layer_system(layer.weights, layer.biases, targets, vars, ctx, false);
  if (inv.dead) return inv;

  // Defining sign constraints over the layer's input expressions, ranging
  // over the surviving y / tau / slack variables only.
  const std::vector<AffineExpr> z = preactivations(layer.weights, layer.biases, inv.map);
  for (std::size_t j = 0; j < z.size(); ++j) {
    push_sign_constraint(inv, z[j], pattern.bits[j]);
    if (inv.dead) return inv;
  }
  return inv;
}

LayerInversion invert_relu_layer(const Layer& layer, const std::vector<AffineExpr>& rhs, const SignPattern& pattern,
                                 VarFactory& vars, const InvertContext& ctx) {
  if (layer.activation.kind != Activation::Kind::ReLU) throw Error("invert_relu_layer requires a ReLU activation");
  if (rhs.size() != layer.fan_out() || pattern.bits.size() != layer.fan_out()) {
    throw DimensionMismatch("right member or pattern width does not match layer width");
  }

  std::vector<AffineExpr> targets(rhs.size());
  std::vector<std::optional<VarId>> slacks(rhs.size());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    if (pattern.bits[j] == Sign::Positive) {
      targets[j] = rhs[j];
    } else {
      const VarId s = vars.fresh(VarKind::Slack, ctx.generation);
      slacks[j] = s;
      targets[j] = AffineExpr::variable(s);
    }
  }
  LayerInversion inv = solve_layer_system(layer.weights, layer.biases, targets, vars, ctx, false);
  if (inv.dead) return inv;

  std::map<VarId, AffineExpr> bindings;
  for (const auto& [v, e] : inv.pinned) bindings.emplace(v, e);

  for (std::size_t j = 0; j < rhs.size(); ++j) {
    const AffineExpr consumed = affine_substitute(rhs[j], bindings);
    if (pattern.bits[j] == Sign::Positive) {
      push_sign_constraint(inv, consumed, Sign::Positive);
    } else {
      // Clamped unit: consumed output must be exactly zero, and the slack
      // (the unobservable pre-activation) is nonpositive.
      append_equality(inv, consumed);
      if (!inv.dead) {
        push_sign_constraint(inv, affine_substitute(AffineExpr::variable(*slacks[j]), bindings), Sign::NonPositive);
      }
    }
    if (inv.dead) return inv;
  }
  return inv;
}

namespace {

struct BranchState {
  std::vector<SignPattern> patterns;
  std::vector<AffineExpr> rhs;
  InequalitySystem constraints;
  VarFactory vars;
  bool dead = false;
  std::string death_reason;
};

void kill(BranchState& b, std::string reason) {
  b.dead = true;
  b.death_reason = std::move(reason);
  b.rhs.clear();
  b.constraints = InequalitySystem{};
}

// Adds a constraint with the ground filter: satisfied ground constraints
// drop, violated ones kill the branch.
void add_constraint(BranchState& b, LinearConstraint c) {
  if (c.is_ground()) {
    if (!c.ground_satisfied()) kill(b, "ground-false constraint " + c.expr.str());
    return;
  }
  b.constraints.add(std::move(c));
}

void apply_inversion(BranchState& b, LayerInversion inv) {
  if (inv.dead) {
    kill(b, std::move(inv.death_reason));
    return;
  }
  if (!inv.pinned.empty()) {
    std::map<VarId, AffineExpr> bindings;
    for (const auto& [v, e] : inv.pinned) bindings.emplace(v, e);
    InequalitySystem rebuilt;
    for (const auto& c : b.constraints.constraints()) {
      LinearConstraint replaced{affine_substitute(c.expr, bindings), c.sense};
      if (replaced.is_ground()) {
        if (!replaced.ground_satisfied()) {
          kill(b, "pinned variable contradicts constraint " + c.expr.str());
          return;
        }
        continue;
      }
      rebuilt.add(std::move(replaced));
    }
    b.constraints = std::move(rebuilt);
    // A pinned output variable is a reachability condition on the target,
    // not an internal parameter; it must stay visible in the polyhedron.
    for (const auto& [v, e] : inv.pinned) {
      if (v.kind != VarKind::Output) continue;
      AffineExpr gap = AffineExpr::variable(v) - e;
      b.constraints.add(LinearConstraint::ge0(gap));
      b.constraints.add(LinearConstraint::le0(std::move(gap)));
    }
  }
  for (auto& c : inv.constraints) {
    add_constraint(b, std::move(c));
    if (b.dead) return;
  }
  b.rhs = std::move(inv.map.outputs);
}

LayerInversion invert_for_pattern(const Layer& layer, const BranchState& branch, const SignPattern& pattern,
                                  VarFactory& vars, const InvertContext& ctx) {
  return layer.activation.kind == Activation::Kind::PReLU
             ? invert_prelu_layer(layer, branch.rhs, pattern, vars, ctx)
             : invert_relu_layer(layer, branch.rhs, pattern, vars, ctx);
}

std::uint64_t checked_omega(const Network& net) {
  std::size_t total_width = 0;
  for (const Layer& layer : net.layers) {
    if (layer.activation.piecewise()) total_width += layer.fan_out();
  }
  if (total_width > 62) throw Error("sum of piecewise layer widths exceeds the enumeration guard (62)");
  return std::uint64_t{1} << total_width;
}

void note_branch_peak(EngineStats* stats, const BranchState& b) {
  if (stats && b.constraints.size() > stats->peak_branch_constraints) {
    stats->peak_branch_constraints = b.constraints.size();
  }
}

Preimage run_engine(const Network& net, std::optional<std::vector<Rational>> target, const BranchBudget& budget,
                    const EngineOptions& options, EngineStats* stats) {
  validate_network(net);
  if (target && target->size() != net.output_dim()) {
    throw DimensionMismatch("target has length " + std::to_string(target->size()) + ", network outputs " +
                            std::to_string(net.output_dim()));
  }

  Preimage result;
  result.target = target;
  result.omega_bound = checked_omega(net);

  BranchState root;
  if (target) {
    root.rhs.reserve(target->size());
    for (const auto& v : *target) root.rhs.emplace_back(v);
  } else {
    for (std::size_t i = 0; i < net.output_dim(); ++i) {
      root.rhs.push_back(AffineExpr::variable(VarId::output(static_cast<std::uint32_t>(i))));
    }
  }
  std::vector<BranchState> branches;
  branches.push_back(std::move(root));

  const bool concrete = target.has_value();

  for (std::size_t step = net.layers.size(); step-- > 0;) {
    const Layer& layer = net.layers[step];
    InvertContext ctx;
    ctx.generation = static_cast<std::uint32_t>(step);
    ctx.symbolic = !concrete;
    ctx.output_layer = (step + 1 == net.layers.size());
    ctx.pivot = options.pivot;

    if (!layer.activation.piecewise()) {
      for (BranchState& b : branches) {
        if (b.dead) continue;
        try {
          LayerInversion inv = invert_affine_layer(layer, b.rhs, b.vars, ctx);
          if (inv.projection) result.projection = inv.projection;
          apply_inversion(b, std::move(inv));
          note_branch_peak(stats, b);
        } catch (const Error& e) {
          throw Error("layer " + std::to_string(step) + ", branch \"" + SolutionBranch{b.patterns, {}, {}, {}}.id() +
                      "\": " + e.what());
        }
      }
      continue;
    }

    const std::size_t width = layer.fan_out();
    std::vector<BranchState> next;
    bool truncated = false;
    for (const BranchState& parent : branches) {
      if (truncated) break;
      for (const SignPattern& pattern : enumerate_sign_patterns(static_cast<std::uint32_t>(step), width)) {
        if (budget.max_branches && next.size() >= *budget.max_branches) {
          if (budget.strict) throw BudgetExceeded("branch budget of " + std::to_string(*budget.max_branches) +
                                                  " reached at layer " + std::to_string(step));
          truncated = true;
          break;
        }
        BranchState child = parent;
        child.patterns.push_back(pattern);
        if (!child.dead) {
          try {
            apply_inversion(child, invert_for_pattern(layer, child, pattern, child.vars, ctx));
            note_branch_peak(stats, child);
          } catch (const Error& e) {
            throw Error("layer " + std::to_string(step) + ", branch \"" +
                        SolutionBranch{child.patterns, {}, {}, {}}.id() + "\": " + e.what());
          }
        }
        next.push_back(std::move(child));
      }
    }
    if (truncated) result.partial = true;

    // Per-fork feasibility pruning; parallelizable because every check is
    // pure and results are collected in branch order.
    if (concrete && options.eager_pruning) {
      auto check = [&](BranchState& b) -> std::optional<std::string> {
        if (b.dead || b.constraints.empty()) return std::nullopt;
        FmStats fm;
        auto verdict = feasibility(b.constraints, &fm);
        if (stats) {
          ++stats->feasibility_checks;
          if (fm.peak_constraints > stats->peak_fm_constraints) stats->peak_fm_constraints = fm.peak_constraints;
        }
        if (std::holds_alternative<Infeasible>(verdict)) return "constraint system infeasible";
        return std::nullopt;
      };
      if (options.threads > 1) {
        std::vector<std::future<std::optional<std::string>>> futures;
        futures.reserve(next.size());
        for (BranchState& b : next) {
          futures.push_back(std::async(std::launch::async, [&b, &check] { return check(b); }));
        }
        for (std::size_t i = 0; i < next.size(); ++i) {
          if (auto reason = futures[i].get()) kill(next[i], *reason);
        }
      } else {
        for (BranchState& b : next) {
          if (auto reason = check(b)) kill(b, *reason);
        }
      }
    }
    branches = std::move(next);
  }

  result.enumerated_count = branches.size();

  for (BranchState& b : branches) {
    if (b.dead) continue;
    SolutionBranch out;
    out.branch_id = std::move(b.patterns);
    out.input_map.outputs = std::move(b.rhs);
    out.constraints = std::move(b.constraints);
    out.constraints.add_variables(out.input_map.input_universe());

    std::vector<VarId> keep(out.constraints.universe().begin(), out.constraints.universe().end());
    FmStats fm;
    auto solved = fm_solve(out.constraints, keep, &fm);
    if (stats && fm.peak_constraints > stats->peak_fm_constraints) stats->peak_fm_constraints = fm.peak_constraints;
    if (std::holds_alternative<Infeasible>(solved)) continue;  // pruned (reachable with pruning off)
    out.solved = std::move(std::get<SolvedBounds>(solved));
    result.branches.push_back(std::move(out));
  }
  return result;
}

}  // namespace

Preimage compute_preimage(const Network& net, const std::vector<Rational>& target, const BranchBudget& budget,
                          const EngineOptions& options, EngineStats* stats) {
  return run_engine(net, target, budget, options, stats);
}

Preimage compute_preimage_symbolic(const Network& net, const BranchBudget& budget, const EngineOptions& options,
                                   EngineStats* stats) {
  return run_engine(net, std::nullopt, budget, options, stats);
}

bool branch_membership(const SolutionBranch& branch, const std::map<VarId, Rational>& target_bindings,
                       const std::vector<Rational>& candidate) {
  if (candidate.size() != branch.input_map.outputs.size()) {
    throw DimensionMismatch("candidate length does not match the branch input dimension");
  }
  std::map<VarId, AffineExpr> bindings;
  for (const auto& [v, r] : target_bindings) bindings.emplace(v, AffineExpr(r));

  InequalitySystem sys;
  for (const auto& c : branch.constraints.constraints()) {
    LinearConstraint bound{affine_substitute(c.expr, bindings), c.sense};
    if (bound.is_ground()) {
      if (!bound.ground_satisfied()) return false;
      continue;
    }
    sys.add(std::move(bound));
  }
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    AffineExpr gap = affine_substitute(branch.input_map.outputs[i], bindings) - AffineExpr(candidate[i]);
    if (gap.is_constant()) {
      if (!gap.constant().is_zero()) return false;
      continue;
    }
    sys.add(LinearConstraint::ge0(gap));
    sys.add(LinearConstraint::le0(gap));
  }
  return std::holds_alternative<Feasible>(feasibility(sys));
}

}  // namespace netinv
