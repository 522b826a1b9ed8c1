#pragma once

#include <stdexcept>
#include <string>

namespace vilab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two objects live in incompatible spaces (dimension or exponent).
struct DimensionMismatch : Error {
  using Error::Error;
};

/// The requested (set variant, p) pair has no exact projection.
struct UnsupportedCombination : Error {
  using Error::Error;
};

/// An evaluation or iteration produced non-finite values (diverging
/// mapping).
struct NonFiniteIterate : Error {
  using Error::Error;
};

}  // namespace vilab
