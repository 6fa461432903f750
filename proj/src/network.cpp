// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/network.hpp"

#include <cctype>
#include <nlohmann/json.hpp>

#include "netinv/errors.hpp"

namespace netinv {

Activation Activation::prelu(Rational alpha) {
  if (alpha.sign() <= 0) {
    throw InvalidActivation("prelu alpha must be > 0 (alpha = 0 is relu, negative alpha is not invertible)");
  }
  return {Kind::PReLU, std::move(alpha), Rational(0)};
}

Activation Activation::linear(Rational alpha, Rational beta) {
  if (alpha.is_zero()) throw InvalidActivation("linear alpha must be nonzero for the layer to be invertible");
  return {Kind::Linear, std::move(alpha), std::move(beta)};
}

Rational Activation::apply(const Rational& x) const {
  switch (kind) {
    case Kind::Identity:
      return x;
    case Kind::Linear:
      return alpha * x + beta;
    case Kind::PReLU:
      return x.sign() > 0 ? x : alpha * x;
    case Kind::ReLU:
      return x.sign() > 0 ? x : Rational(0);
  }
  return x;
}

void validate_network(const Network& net) {
  if (net.input_dim == 0) throw DimensionMismatch("input_dim must be positive");
  std::size_t expected = net.input_dim;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    if (layer.fan_out() == 0) throw DimensionMismatch("layer " + std::to_string(l) + ": empty weight matrix");
    if (layer.fan_in() != expected) {
      throw DimensionMismatch("layer " + std::to_string(l) + ": expects " + std::to_string(layer.fan_in()) +
                              " inputs but the previous width is " + std::to_string(expected));
    }
    if (layer.biases.size() != layer.fan_out()) {
      throw DimensionMismatch("layer " + std::to_string(l) + ": " + std::to_string(layer.biases.size()) +
                              " biases for " + std::to_string(layer.fan_out()) + " units");
    }
    switch (layer.activation.kind) {
      case Activation::Kind::Linear:
        if (layer.activation.alpha.is_zero())
          throw InvalidActivation("layer " + std::to_string(l) + ": linear alpha must be nonzero");
        break;
      case Activation::Kind::PReLU:
        if (layer.activation.alpha.sign() <= 0)
          throw InvalidActivation("layer " + std::to_string(l) + ": prelu alpha must be > 0");
        break;
      default:
        break;
    }
    expected = layer.fan_out();
  }
}

namespace {

using json = nlohmann::json;

// Rewrites every bare JSON number into a string literal so nlohmann never
// converts decimal text through a double. "0.1" must stay 1/10 exactly.
std::string quote_numbers(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 16);
  bool in_string = false;
  bool escaped = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      ++i;
      continue;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '-' ||
                                 text[j] == '+' || text[j] == '.' || text[j] == 'e' || text[j] == 'E')) {
        ++j;
      }
      out.push_back('"');
      out.append(text.substr(i, j - i));
      out.push_back('"');
      i = j;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

Rational rational_field(const json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + ": expected a number or rational string");
  try {
    return Rational::from_string(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Activation parse_activation(const json& v, const std::string& where) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (name == "identity") return Activation::identity();
    if (name == "relu") return Activation::relu();
    throw SchemaError(where + ": unknown activation \"" + name + "\"");
  }
  if (v.is_object()) {
    if (v.contains("prelu")) {
      const json& p = v["prelu"];
      if (!p.is_object() || !p.contains("alpha")) throw SchemaError(where + ": prelu needs an alpha field");
      try {
        return Activation::prelu(rational_field(p["alpha"], where + ".prelu.alpha"));
      } catch (const InvalidActivation& e) {
        throw InvalidActivation(where + ": " + e.what());
      }
    }
    if (v.contains("linear")) {
      const json& p = v["linear"];
      if (!p.is_object() || !p.contains("alpha") || !p.contains("beta"))
        throw SchemaError(where + ": linear needs alpha and beta fields");
      try {
        return Activation::linear(rational_field(p["alpha"], where + ".linear.alpha"),
                                  rational_field(p["beta"], where + ".linear.beta"));
      } catch (const InvalidActivation& e) {
        throw InvalidActivation(where + ": " + e.what());
      }
    }
  }
  throw SchemaError(where + ": activation must be \"identity\", \"relu\", {\"prelu\": ...} or {\"linear\": ...}");
}

}  // namespace

Network parse_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(quote_numbers(document));
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model document must be a JSON object");
  if (!doc.contains("input_dim") || !doc.contains("layers")) {
    throw SchemaError("model document needs input_dim and layers fields");
  }

  Network net;
  const Rational dim = rational_field(doc["input_dim"], "input_dim");
  if (!dim.is_integer() || dim.sign() <= 0 || dim > Rational(1 << 20)) {
    throw SchemaError("input_dim must be a positive integer of sane size");
  }
  net.input_dim = static_cast<std::size_t>(std::stoul(dim.num_str()));

  const json& layers = doc["layers"];
  if (!layers.is_array() || layers.empty()) throw SchemaError("layers must be a nonempty array");

  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string where = "layer " + std::to_string(l);
    const json& jlayer = layers[l];
    if (!jlayer.is_object()) throw SchemaError(where + ": expected an object");
    if (!jlayer.contains("weights") || !jlayer.contains("biases") || !jlayer.contains("activation")) {
      throw SchemaError(where + ": needs weights, biases, and activation fields");
    }

    const json& jweights = jlayer["weights"];
    if (!jweights.is_array() || jweights.empty()) throw SchemaError(where + ": weights must be a nonempty array of rows");
    std::vector<std::vector<Rational>> rows;
    rows.reserve(jweights.size());
    for (std::size_t r = 0; r < jweights.size(); ++r) {
      const json& jrow = jweights[r];
      if (!jrow.is_array() || jrow.empty())
        throw SchemaError(where + ": weights row " + std::to_string(r) + " must be a nonempty array");
      std::vector<Rational> row;
      row.reserve(jrow.size());
      for (std::size_t c = 0; c < jrow.size(); ++c) {
        row.push_back(rational_field(jrow[c], where + ".weights[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw SchemaError(where + ": ragged weights (row " + std::to_string(r) + ")");
      rows.push_back(std::move(row));
    }

    Layer layer;
    layer.weights = Mat::from_rows(rows);

    const json& jbiases = jlayer["biases"];
    if (!jbiases.is_array()) throw SchemaError(where + ": biases must be an array");
    for (std::size_t b = 0; b < jbiases.size(); ++b) {
      layer.biases.push_back(rational_field(jbiases[b], where + ".biases[" + std::to_string(b) + "]"));
    }

    layer.activation = parse_activation(jlayer["activation"], where + ".activation");
    net.layers.push_back(std::move(layer));
  }

  validate_network(net);
  return net;
}

std::vector<Rational> forward(const Network& net, const std::vector<Rational>& input) {
  if (input.size() != net.input_dim) {
    throw DimensionMismatch("forward input has length " + std::to_string(input.size()) + ", network expects " +
                            std::to_string(net.input_dim));
  }
  std::vector<Rational> current = input;
  for (const Layer& layer : net.layers) {
    std::vector<Rational> next = layer.weights.apply(current);
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] += layer.biases[j];
      next[j] = layer.activation.apply(next[j]);
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace netinv
