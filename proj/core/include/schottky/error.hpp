#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input: bad spec files, unknown words,
/// arguments outside an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Requested depth or word count exceeds the configured cap.
class DepthCapError : public InputError {
 public:
  using InputError::InputError;
};

/// A numerical procedure failed: no bracket, degenerate measure, ill-posed
/// Gram-Schmidt step, poles.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dirichlet series evaluated outside its half-plane of convergence.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace schottky
