#pragma once

#include <stdexcept>
#include <string>

namespace hyperhardy {

/// Raised when an argument violates a documented precondition (bad dimension,
/// point at a pole, parameter outside its validity window, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its contract
/// (non-finite integrand, eigensolver stagnation, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyperhardy
