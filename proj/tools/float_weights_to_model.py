#!/usr/bin/env python3
# Copyright (c) netinv contributors.
# SPDX-License-Identifier: Apache-2.0
"""Convert float network weights into the exact rational model format.

The netinv CLI already converts decimal *text* exactly (0.1 becomes 1/10).
This script serves the other case: weights exported from a float framework,
where the IEEE-754 value itself is the ground truth. Every float is encoded
as the exact rational its bit pattern denotes, so the produced model is a
faithful image of the trained network, not a re-rounding of it.

Input and output share the netinv model schema; only number encoding
changes:

    {"input_dim": 2, "layers": [{"weights": [[0.1, -1.5]],
                                 "biases": [0.25], "activation": "relu"}]}

Usage:
    float_weights_to_model.py trained.json > model.json
"""

import argparse
import json
import sys
from fractions import Fraction


def exact(value):
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers in the model schema")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value  # already rational or decimal text; the CLI parses it exactly
    if isinstance(value, float):
        fraction = Fraction(value)  # exact binary value, no rounding
        if fraction.denominator == 1:
            return str(fraction.numerator)
        return f"{fraction.numerator}/{fraction.denominator}"
    raise ValueError(f"unsupported number: {value!r}")


def convert_activation(activation):
    if isinstance(activation, str):
        return activation
    if isinstance(activation, dict):
        out = {}
        for kind, params in activation.items():
            out[kind] = {name: exact(v) for name, v in params.items()}
        return out
    raise ValueError(f"unsupported activation: {activation!r}")


def convert(model):
    return {
        "input_dim": model["input_dim"],
        "layers": [
            {
                "weights": [[exact(w) for w in row] for row in layer["weights"]],
                "biases": [exact(b) for b in layer["biases"]],
                "activation": convert_activation(layer["activation"]),
            }
            for layer in model["layers"]
        ],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input", help="model JSON with float weights ('-' for stdin)")
    parser.add_argument("--out", help="output path (default stdout)")
    args = parser.parse_args()

    with (sys.stdin if args.input == "-" else open(args.input)) as handle:
        model = json.load(handle)
    text = json.dumps(convert(model), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
