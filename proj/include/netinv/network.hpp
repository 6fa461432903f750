// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netinv/matrix.hpp"
#include "netinv/rational.hpp"

namespace netinv {

struct Activation {
  enum class Kind : std::uint8_t { Identity, Linear, PReLU, ReLU };
  Kind kind = Kind::Identity;
  Rational alpha{1};
  Rational beta{0};

  static Activation identity() { return {Kind::Identity, Rational(1), Rational(0)}; }
  static Activation relu() { return {Kind::ReLU, Rational(1), Rational(0)}; }
  static Activation prelu(Rational alpha);          // requires alpha > 0
  static Activation linear(Rational alpha, Rational beta);  // requires alpha != 0

  bool piecewise() const { return kind == Kind::PReLU || kind == Kind::ReLU; }
  Rational apply(const Rational& x) const;
};

struct Layer {
  Mat weights;                  // M x N: M outputs from N inputs
  std::vector<Rational> biases;  // length M
  Activation activation;

  std::size_t fan_in() const { return weights.cols(); }
  std::size_t fan_out() const { return weights.rows(); }
};

struct Network {
  std::vector<Layer> layers;
  std::size_t input_dim = 0;

  std::size_t output_dim() const { return layers.empty() ? input_dim : layers.back().fan_out(); }
};

/// Validates activation legality, bias lengths, and the dimension chain.
/// Throws DimensionMismatch / InvalidActivation.
void validate_network(const Network& net);

/// Parses the JSON model document. Every numeric literal is converted
/// exactly from its decimal text (0.1 -> 1/10); rational strings "p/q" are
/// accepted anywhere a number is. Throws SchemaError / DimensionMismatch /
/// InvalidActivation with positional context.
Network parse_model(std::string_view document);

/// Exact forward evaluation. Throws DimensionMismatch on input length.
std::vector<Rational> forward(const Network& net, const std::vector<Rational>& input);

}  // namespace netinv
