// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "netinv/engine.hpp"
#include "netinv/oracle.hpp"

namespace netinv {

/// Lossless, diff-friendly document:
/// {"target": [...], "omega_bound": n, "enumerated": n, "partial": bool,
///  "branches": [{"id": "...", "input_map": [{"terms": {"y0": "p/q"},
///  "const": "p/q"}], "constraints": [{"coeffs": {...}, "const": "p/q",
///  "sense": "ge"|"gt"}], "free_vars": [...], "slack_vars": [...]}]}
/// plus a "projection" object when the target was replaced by its closest
/// valid output. Identical runs produce byte-identical text.
std::string preimage_to_json(const Preimage& preimage);

/// Human-readable form: per branch, the input assignments, the constraint
/// polyhedron, and the solved variable bounds.
std::string preimage_to_text(const Preimage& preimage);

std::string report_to_json(const VerificationReport& report);

}  // namespace netinv
