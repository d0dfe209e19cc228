#pragma once

#include <stdexcept>
#include <string>

namespace qflow {

/// Argument outside the mathematical domain of a function (e.g. log_q of a non-positive number).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A parameter violates a documented precondition (q outside the admissible set, h <= 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested quantity is well defined but lies outside the range where the
/// library's closed forms are cross-checked against quadrature.
class OutsideVerifiedRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A numerical routine could not produce a result (no bracket, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qflow
