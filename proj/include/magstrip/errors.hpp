#pragma once

#include <stdexcept>
#include <string>

namespace magstrip {

/// Base class for every error raised by the library. The CLI maps
/// subclasses onto exit codes (2 for input/precondition problems, 3 for
/// solver failures).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A ball, point or support does not fit inside the strip as required.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at the Aharonov-Bohm point.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Caller-side contract violation (ordering of balls, grid adequacy, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Edge phases do not reproduce the declared field.
class GaugeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach the requested residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace magstrip
