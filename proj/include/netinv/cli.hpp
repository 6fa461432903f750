// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netinv/network.hpp"
#include "netinv/oracle.hpp"

namespace netinv::cli {

struct RunConfig {
  std::string model_path;
  std::vector<Rational> target;
  std::optional<std::uint64_t> max_branches;
  bool strict_budget = false;
  bool symbolic = false;
  enum class Verify { None, RoundTrip, Grid } verify = Verify::None;
  std::size_t samples = 8;
  GridSpec grid;
  enum class Format { Json, Text } format = Format::Json;
  std::string out_path;  // empty writes to `out`
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Exit codes: 0 success, 2 empty preimage, 1 any error.
int cmd_preimage(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs the configured oracle suite after the preimage computation.
/// Exit 0 iff every check passes.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::string shape;
  std::uint64_t omega = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t feasible = 0;
  double wall_ms = 0.0;
  std::size_t peak_constraints = 0;
};

std::vector<BenchRow> run_bench(const std::vector<std::vector<std::size_t>>& shapes, std::uint64_t seed,
                                const Activation& hidden);

int cmd_bench(const std::vector<std::vector<std::size_t>>& shapes, std::uint64_t seed, const Activation& hidden,
              RunConfig::Format format, std::ostream& out, std::ostream& err);

/// Full argv interface used by the binary; exposed for in-process tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a comma-separated rational list ("3,4" or "1/2,-3/4").
std::vector<Rational> parse_target_csv(const std::string& csv);

/// Parses "lo:hi:step" into a grid specification.
GridSpec parse_grid(const std::string& text);

}  // namespace netinv::cli
