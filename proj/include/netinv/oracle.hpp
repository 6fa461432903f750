// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "netinv/engine.hpp"

namespace netinv {

/// Uniform lattice description: every dimension ranges [lo, hi] at `step`.
struct GridSpec {
  Rational lo{-3};
  Rational hi{3};
  Rational step{1, 4};
};

struct VerificationReport {
  std::size_t branches_checked = 0;
  std::size_t samples_per_branch = 0;

  struct RoundTripFailure {
    std::string branch;
    std::map<VarId, Rational> assignment;
  };
  std::vector<RoundTripFailure> round_trip_failures;
  std::vector<std::vector<Rational>> completeness_misses;
  std::vector<std::string> oracle_disagreements;

  bool passed() const {
    return round_trip_failures.empty() && completeness_misses.empty() && oracle_disagreements.empty();
  }
};

/// Samples every feasible branch with seeded rational hints, pushes the
/// sampled inputs through the network, and records any exact mismatch with
/// the preimage's (effective) target. Requires a concrete-target preimage.
VerificationReport verify_round_trip(const Network& net, const Preimage& preimage, std::size_t samples,
                                     std::uint64_t seed);

/// Scans the full lattice (input dimension <= 3): every point whose forward
/// image equals the target exactly must belong to some branch.
VerificationReport verify_completeness_grid(const Network& net, const std::vector<Rational>& target,
                                            const Preimage& preimage, const GridSpec& grid);

struct OracleFeasible {
  std::map<VarId, Rational> witness;
};
struct OracleProbablyInfeasible {};

/// One-sided brute-force feasibility: a dense rational lattice scan over
/// the box (universe <= 4 variables). A returned witness satisfies every
/// constraint exactly; exhaustion proves nothing.
std::variant<OracleFeasible, OracleProbablyInfeasible> feasibility_oracle(const InequalitySystem& system,
                                                                          const GridSpec& box);

}  // namespace netinv
