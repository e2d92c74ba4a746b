#pragma once

#include <stdexcept>
#include <string>

namespace sweepvi {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input rejected before any computation started (bad value, violated invariant).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Vector/matrix sizes do not agree.
class DimensionError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// An iterative method exhausted its iteration budget.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual, long iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual;
  long iterations;
};

/// A direct factorization failed (operator not positive definite).
class FactorizationError : public Error {
public:
  using Error::Error;
};

/// A computed solution failed its optimality/inclusion certificate.
class CertificateError : public Error {
public:
  using Error::Error;
};

/// Support function requested along a direction where the set is unbounded.
class UnboundedSupportError : public Error {
public:
  using Error::Error;
};

/// Malformed input file (config, matrix, CSV).
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, std::string field = "")
      : Error(what), line(line), field(std::move(field)) {}
  int line;
  std::string field;
};

/// A time step of an evolution solve failed; carries the 1-based step index.
class StepError : public Error {
public:
  StepError(const std::string& what, long step_index)
      : Error(what), step_index(step_index) {}
  long step_index;
};

}  // namespace sweepvi
