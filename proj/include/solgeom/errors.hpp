#pragma once

#include <stdexcept>
#include <string>

namespace solgeom {

// Argument outside the mathematical domain of an operation (k >= 1, x <= 0
// for the AGM, target below the range of an invariant, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The caller broke a stated precondition that depends on state rather than
// on a single scalar: non-unit velocity, point off a cylinder, wrong
// geodesic class, mismatched altitudes.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure gave up. `residual` is the best (for solvers) or
// worst (for integrators) residual observed before giving up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace solgeom
