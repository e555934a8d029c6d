#pragma once

#include <stdexcept>
#include <string>

namespace deadcore {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter tuple outside its admissible set.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A closed-form constant is undefined for the given dimension/exponents.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Two fields live on different grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil does not fit inside the domain.
class StencilError : public Error {
 public:
  using Error::Error;
};

/// Requested evaluation inside the dead core where the form is degenerate.
class DeadCoreEvaluationError : public Error {
 public:
  using Error::Error;
};

/// A diagnostic needs more grid resolution than available.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class FitUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Sampling point outside the computational domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear iteration stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// Residual grew persistently under a fixed pseudo-time step.
class InstabilityError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace deadcore
