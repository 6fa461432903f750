// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace netinv {

// Base class for every error the library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exact-algebra
struct MissingVariable : Error {
  using Error::Error;
};

// linear-systems
struct NonSquare : Error {
  using Error::Error;
};
struct NonWide : Error {
  using Error::Error;
};
struct NonTall : Error {
  using Error::Error;
};
struct RankDeficientAllPivots : Error {
  using Error::Error;
};
struct InsufficientFreeVariables : Error {
  using Error::Error;
};
struct RankDeficientColumns : Error {
  using Error::Error;
};

// network-model
struct SchemaError : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct InvalidActivation : Error {
  using Error::Error;
};

// preimage-engine
struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace netinv
