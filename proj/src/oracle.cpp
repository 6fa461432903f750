// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/oracle.hpp"

#include "netinv/errors.hpp"
#include "netinv/generators.hpp"

namespace netinv {

namespace {

// Odometer walk over a rational lattice: calls fn with each tuple; fn
// returning true stops the scan.
template <typename Fn>
bool scan_lattice(std::size_t dims, const GridSpec& grid, Fn&& fn) {
  if (grid.step.sign() <= 0) throw Error("grid step must be positive");
  if (grid.hi < grid.lo) throw Error("grid upper bound below lower bound");
  std::vector<Rational> point(dims, grid.lo);
  while (true) {
    if (fn(point)) return true;
    std::size_t d = 0;
    for (; d < dims; ++d) {
      point[d] += grid.step;
      if (point[d] <= grid.hi) break;
      point[d] = grid.lo;
    }
    if (d == dims) return false;
  }
}

}  // namespace

VerificationReport verify_round_trip(const Network& net, const Preimage& preimage, std::size_t samples,
                                     std::uint64_t seed) {
  const std::vector<Rational>* target = preimage.effective_target();
  if (!target) throw Error("round-trip verification needs a concrete-target preimage");

  VerificationReport report;
  report.samples_per_branch = samples;
  for (std::size_t bi = 0; bi < preimage.branches.size(); ++bi) {
    const SolutionBranch& branch = preimage.branches[bi];
    ++report.branches_checked;
    if (!branch.solved) {
      report.round_trip_failures.push_back({branch.id(), {}});
      continue;
    }
    for (std::size_t s = 0; s < samples; ++s) {
      DetRng rng(seed ^ (0x5851F42D4C957F2DULL * (bi + 1) + s));
      std::map<VarId, Rational> hints;
      for (const VarId& v : branch.solved->elimination_order) hints.emplace(v, rng.rational(-16, 16, 4));
      auto assignment = sample_point(*branch.solved, hints);
      if (!assignment) {
        report.round_trip_failures.push_back({branch.id(), {}});
        continue;
      }
      std::vector<Rational> input;
      input.reserve(branch.input_map.outputs.size());
      for (const auto& expr : branch.input_map.outputs) input.push_back(affine_evaluate(expr, *assignment));
      if (forward(net, input) != *target) {
        report.round_trip_failures.push_back({branch.id(), *assignment});
      }
    }
  }
  return report;
}

VerificationReport verify_completeness_grid(const Network& net, const std::vector<Rational>& target,
                                            const Preimage& preimage, const GridSpec& grid) {
  if (net.input_dim > 3) throw Error("grid completeness scan is limited to input dimension <= 3");
  VerificationReport report;
  report.branches_checked = preimage.branches.size();
  scan_lattice(net.input_dim, grid, [&](const std::vector<Rational>& point) {
    if (forward(net, point) != target) return false;
    for (const SolutionBranch& branch : preimage.branches) {
      if (branch_membership(branch, {}, point)) return false;
    }
    report.completeness_misses.push_back(point);
    return false;
  });
  return report;
}

std::variant<OracleFeasible, OracleProbablyInfeasible> feasibility_oracle(const InequalitySystem& system,
                                                                          const GridSpec& box) {
  if (system.universe().size() > 4) throw Error("feasibility oracle is limited to 4 variables");
  const std::vector<VarId> vars(system.universe().begin(), system.universe().end());

  std::map<VarId, Rational> witness;
  const bool found = scan_lattice(vars.size(), box, [&](const std::vector<Rational>& point) {
    std::map<VarId, Rational> assignment;
    for (std::size_t i = 0; i < vars.size(); ++i) assignment.emplace(vars[i], point[i]);
    for (const LinearConstraint& c : system.constraints()) {
      const Rational v = affine_evaluate(c.expr, assignment);
      const bool ok = c.sense == Sense::Ge ? v.sign() >= 0 : v.sign() > 0;
      if (!ok) return false;
    }
    witness = std::move(assignment);
    return true;
  });
  if (found) return OracleFeasible{std::move(witness)};
  return OracleProbablyInfeasible{};
}

}  // namespace netinv
