// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/serialize.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace netinv {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json expr_to_json(const AffineExpr& expr) {
  ordered_json terms = ordered_json::object();
  for (const auto& [v, c] : expr.terms()) terms[to_string(v)] = c.str();
  ordered_json out = ordered_json::object();
  out["terms"] = std::move(terms);
  out["const"] = expr.constant().str();
  return out;
}

ordered_json constraint_to_json(const LinearConstraint& c) {
  ordered_json coeffs = ordered_json::object();
  for (const auto& [v, r] : c.expr.terms()) coeffs[to_string(v)] = r.str();
  ordered_json out = ordered_json::object();
  out["coeffs"] = std::move(coeffs);
  out["const"] = c.expr.constant().str();
  out["sense"] = c.sense == Sense::Ge ? "ge" : "gt";
  return out;
}

ordered_json rationals_to_json(const std::vector<Rational>& values) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : values) arr.push_back(v.str());
  return arr;
}

std::string sense_symbol(Sense s) { return s == Sense::Ge ? ">=" : ">"; }

}  // namespace

std::string preimage_to_json(const Preimage& preimage) {
  ordered_json doc = ordered_json::object();
  if (preimage.target) {
    doc["target"] = rationals_to_json(*preimage.target);
  } else {
    doc["target"] = nullptr;  // symbolic run: y stays a variable vector
  }
  doc["omega_bound"] = preimage.omega_bound;
  doc["enumerated"] = preimage.enumerated_count;
  doc["partial"] = preimage.partial;
  if (preimage.projection) {
    ordered_json proj = ordered_json::object();
    proj["projected_target"] = rationals_to_json(preimage.projection->projected_target);
    proj["residual"] = rationals_to_json(preimage.projection->residual);
    doc["projection"] = std::move(proj);
  }

  ordered_json branches = ordered_json::array();
  for (const SolutionBranch& b : preimage.branches) {
    ordered_json jb = ordered_json::object();
    jb["id"] = b.id();
    ordered_json inputs = ordered_json::array();
    for (const auto& e : b.input_map.outputs) inputs.push_back(expr_to_json(e));
    jb["input_map"] = std::move(inputs);
    ordered_json constraints = ordered_json::array();
    for (const auto& c : b.constraints.constraints()) constraints.push_back(constraint_to_json(c));
    jb["constraints"] = std::move(constraints);

    ordered_json free_vars = ordered_json::array();
    ordered_json slack_vars = ordered_json::array();
    for (const VarId& v : b.constraints.universe()) {
      if (v.kind == VarKind::Free) free_vars.push_back(to_string(v));
      if (v.kind == VarKind::Slack) slack_vars.push_back(to_string(v));
    }
    jb["free_vars"] = std::move(free_vars);
    jb["slack_vars"] = std::move(slack_vars);
    branches.push_back(std::move(jb));
  }
  doc["branches"] = std::move(branches);
  return doc.dump(2) + "\n";
}

std::string preimage_to_text(const Preimage& preimage) {
  std::ostringstream os;
  if (preimage.target) {
    os << "target:";
    for (const auto& v : *preimage.target) os << ' ' << v.str();
    os << '\n';
  } else {
    os << "target: symbolic (y0, y1, ...)\n";
  }
  os << "omega bound: " << preimage.omega_bound << "  enumerated: " << preimage.enumerated_count
     << "  feasible: " << preimage.branches.size() << "  partial: " << (preimage.partial ? "yes" : "no") << '\n';
  if (preimage.projection) {
    os << "note: target unreachable; solved for its least-squares closest valid output\n";
    os << "  projected target:";
    for (const auto& v : preimage.projection->projected_target) os << ' ' << v.str();
    os << "\n  residual:";
    for (const auto& v : preimage.projection->residual) os << ' ' << v.str();
    os << '\n';
  }

  for (const SolutionBranch& b : preimage.branches) {
    os << "\nbranch \"" << b.id() << "\"\n";
    for (std::size_t i = 0; i < b.input_map.outputs.size(); ++i) {
      os << "  x" << i << " = " << b.input_map.outputs[i].str() << '\n';
    }
    if (!b.constraints.empty()) {
      os << "  subject to:\n";
      for (const auto& c : b.constraints.constraints()) {
        os << "    " << c.expr.str() << ' ' << sense_symbol(c.sense) << " 0\n";
      }
    }
    if (b.solved && !b.solved->entries.empty()) {
      os << "  bounds:\n";
      for (const auto& entry : b.solved->entries) {
        // A variable boxed to a single value is reported as pinned.
        if (entry.lower.size() == 1 && entry.upper.size() == 1 && entry.lower[0].expr.is_constant() &&
            entry.lower[0].expr == entry.upper[0].expr && !entry.lower[0].strict && !entry.upper[0].strict) {
          os << "    " << to_string(entry.var) << " = " << entry.lower[0].expr.str() << " (pinned)\n";
          continue;
        }
        for (const auto& bound : entry.lower) {
          os << "    " << to_string(entry.var) << (bound.strict ? " > " : " >= ") << bound.expr.str() << '\n';
        }
        for (const auto& bound : entry.upper) {
          os << "    " << to_string(entry.var) << (bound.strict ? " < " : " <= ") << bound.expr.str() << '\n';
        }
      }
    }
  }
  return os.str();
}

std::string report_to_json(const VerificationReport& report) {
  ordered_json doc = ordered_json::object();
  doc["branches_checked"] = report.branches_checked;
  doc["samples_per_branch"] = report.samples_per_branch;

  ordered_json failures = ordered_json::array();
  for (const auto& f : report.round_trip_failures) {
    ordered_json jf = ordered_json::object();
    jf["branch"] = f.branch;
    ordered_json assignment = ordered_json::object();
    for (const auto& [v, r] : f.assignment) assignment[to_string(v)] = r.str();
    jf["assignment"] = std::move(assignment);
    failures.push_back(std::move(jf));
  }
  doc["round_trip_failures"] = std::move(failures);

  ordered_json misses = ordered_json::array();
  for (const auto& point : report.completeness_misses) misses.push_back(rationals_to_json(point));
  doc["completeness_misses"] = std::move(misses);

  ordered_json disagreements = ordered_json::array();
  for (const auto& d : report.oracle_disagreements) disagreements.push_back(d);
  doc["oracle_disagreements"] = std::move(disagreements);

  doc["passed"] = report.passed();
  return doc.dump(2) + "\n";
}

}  // namespace netinv
