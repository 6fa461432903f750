// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/generators.hpp"

#include "netinv/errors.hpp"

namespace netinv {

Network random_network(const std::vector<std::size_t>& shape, const Activation& hidden, DetRng& rng) {
  if (shape.size() < 2) throw Error("a network shape needs at least input and output widths");
  Network net;
  net.input_dim = shape.front();
  for (std::size_t l = 1; l < shape.size(); ++l) {
    Layer layer;
    layer.weights = Mat(shape[l], shape[l - 1]);
    for (std::size_t i = 0; i < shape[l]; ++i) {
      for (std::size_t j = 0; j < shape[l - 1]; ++j) layer.weights.at(i, j) = rng.rational(-9, 9, 9);
      layer.biases.push_back(rng.rational(-9, 9, 9));
    }
    layer.activation = (l + 1 == shape.size()) ? Activation::identity() : hidden;
    net.layers.push_back(std::move(layer));
  }
  validate_network(net);
  return net;
}

std::vector<Rational> random_point(std::size_t dim, DetRng& rng) {
  std::vector<Rational> out;
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) out.push_back(rng.rational(-6, 6, 3));
  return out;
}

InequalitySystem random_system(std::size_t vars, std::size_t constraints, DetRng& rng) {
  InequalitySystem sys;
  for (std::size_t v = 0; v < vars; ++v) sys.add_variable(VarId::free_var(0, static_cast<std::uint32_t>(v)));
  for (std::size_t c = 0; c < constraints; ++c) {
    AffineExpr expr;
    for (std::size_t v = 0; v < vars; ++v) {
      if (rng.uniform(0, 3) == 0) continue;  // keep some sparsity
      expr.add_term(VarId::free_var(0, static_cast<std::uint32_t>(v)), rng.rational(-5, 5, 5));
    }
    expr.add_constant(rng.rational(-5, 5, 5));
    const bool strict = rng.uniform(0, 3) == 0;
    sys.add(strict ? LinearConstraint::gt0(std::move(expr)) : LinearConstraint::ge0(std::move(expr)));
  }
  return sys;
}

}  // namespace netinv
