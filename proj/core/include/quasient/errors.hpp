#pragma once

#include <stdexcept>
#include <string>

namespace quasient {

/// Base class for all quasient errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or invalid input to a constructor/operation (exit 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violates a physical bound beyond tolerance (exit 3).
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge within its cap (exit 3).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Generic numerical failure, e.g. a Cholesky of an indefinite matrix (exit 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input is degenerate for the requested operation, e.g. a tangent tensor
/// that projects to zero or a non-injective MPS tensor (exit 3).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Correlation length is undefined because the model is gapless (exit 3).
class GaplessModelError : public Error {
 public:
  using Error::Error;
};

/// A size cap would be exceeded (exit 4).
class SizeCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace quasient
