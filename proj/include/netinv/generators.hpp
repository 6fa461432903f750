// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "netinv/network.hpp"
#include "netinv/polyhedra.hpp"

namespace netinv {

/// Splitmix64-based deterministic generator. Identical seeds give identical
/// streams on every platform, which std distributions do not guarantee.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed + 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Inclusive range; slight modulo bias is irrelevant for test inputs.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  Rational rational(std::int64_t num_lo, std::int64_t num_hi, std::int64_t den_hi) {
    return Rational(uniform(num_lo, num_hi), uniform(1, den_hi));
  }

 private:
  std::uint64_t state_;
};

/// Random network: weight and bias numerators in [-9, 9], denominators in
/// [1, 9]; hidden layers use `hidden`, the output layer is identity.
Network random_network(const std::vector<std::size_t>& shape, const Activation& hidden, DetRng& rng);

std::vector<Rational> random_point(std::size_t dim, DetRng& rng);

/// Random inequality system over Free variables t0.0..t0.{vars-1} with
/// numerators and denominators bounded by 5; roughly a quarter of the
/// constraints are strict.
InequalitySystem random_system(std::size_t vars, std::size_t constraints, DetRng& rng);

}  // namespace netinv
