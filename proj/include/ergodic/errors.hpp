#pragma once

#include <stdexcept>

namespace ergodic {

/// Malformed or inconsistent input: space mismatch, bad labels, non-stochastic rows.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A subset K from which the chain can escape for good (trace chain undefined).
class NonReturningSubset : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The requested limit depends on the starting point (several ergodic classes).
class AmbiguousLimit : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Floating point broke a structural assumption (e.g. a defective peripheral eigenvalue).
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergodic
