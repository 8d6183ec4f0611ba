#pragma once

#include <stdexcept>
#include <string>

namespace nlch {

/// Base class for all errors raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or invalid parameters (mesh sizes, case/layer mismatch, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The interface parameter xi^h is negative at some node of Omega.
class WellPosednessError : public Error {
 public:
  WellPosednessError(std::size_t node, double value);
  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_;
  double value_;
};

/// A state outside the admissible set |u| <= 1.
class InfeasibleStateError : public Error {
 public:
  using Error::Error;
};

/// Linear solver breakdown, PDAS non-convergence, quadrature failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlch
