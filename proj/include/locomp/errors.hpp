#pragma once

#include <stdexcept>
#include <string>

namespace locomp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the domain of the space (|z| >= 1 for the ball).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters rejected before any computation starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, non-convergence, or a refused resolution.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace locomp
