#pragma once

#include <stdexcept>

namespace bandlab {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hyperparameter (temperature, bandwidth, k, ...) is outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A logit or probability vector violates its invariants.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but leaves nothing to work with (all masked, empty subset).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace bandlab
