#pragma once

#include <stdexcept>
#include <string>

namespace polysieve {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a supported limit (degree cap, rule order, overflow).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// eta_0 * gamma_0 is too close to zero to normalize by.
class DegenerateNormalizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Random-walk chain rejected every proposal for too long.
class StuckChainError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace polysieve
