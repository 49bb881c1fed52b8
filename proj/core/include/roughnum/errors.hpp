#pragma once

#include <stdexcept>
#include <string>

namespace roughnum {

/// Thrown when an input violates a documented precondition or invariant
/// (non-monotone grid, negative control value, p outside (2,3), ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation fails numerically: solver divergence, a Gram
/// matrix that cannot be factorized after jitter, too few tail points.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roughnum
