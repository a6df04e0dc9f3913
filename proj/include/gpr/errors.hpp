#pragma once

#include <stdexcept>
#include <string>

namespace gpr {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input data violates a structural precondition (non-finite entries,
// zero rows, empty index sets, ...).
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not complete (Cholesky breakdown, divergence).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gradient subsampling found no usable support: {i : y_i >= 0} is empty.
struct EmptySupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted sampling was asked to draw from an all-zero weight vector.
struct ZeroWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace gpr
