// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace netinv {

enum class VarKind : std::uint8_t {
  Output = 0,  // a target component y_i
  Free = 1,    // a free parameter tau introduced by a wide layer
  Input = 2,   // a layer input unknown, transient during a solve
  Slack = 3,   // the nonpositive pre-activation of a clamped unit
};

/// Identity of a symbolic variable. The generation counter is the layer
/// depth at which the variable was introduced, so composing layer
/// inversions never collides names.
struct VarId {
  VarKind kind{VarKind::Output};
  std::uint32_t generation{0};
  std::uint32_t index{0};

  friend auto operator<=>(const VarId&, const VarId&) = default;

  static VarId output(std::uint32_t index) { return VarId{VarKind::Output, 0, index}; }
  static VarId free_var(std::uint32_t generation, std::uint32_t index) { return VarId{VarKind::Free, generation, index}; }
  static VarId input(std::uint32_t generation, std::uint32_t index) { return VarId{VarKind::Input, generation, index}; }
  static VarId slack(std::uint32_t generation, std::uint32_t index) { return VarId{VarKind::Slack, generation, index}; }
};

/// Canonical rendering: "y0", "t<gen>.<idx>", "s<gen>.<idx>", "x<gen>.<idx>".
std::string to_string(const VarId& v);

/// Mints fresh Free/Slack indices per generation. Branches copy their
/// factory on fork, so sibling branches mint independently.
class VarFactory {
 public:
  VarId fresh(VarKind kind, std::uint32_t generation) {
    auto key = std::make_pair(kind, generation);
    return VarId{kind, generation, next_[key]++};
  }

 private:
  std::map<std::pair<VarKind, std::uint32_t>, std::uint32_t> next_;
};

}  // namespace netinv
