#pragma once

#include <stdexcept>
#include <string>

namespace fiberspin {

/// Raised when a state leaves the region where the model equations are
/// defined (nonpositive speed, vanishing internal energy, r <= 0, ...).
/// Solvers catch it and damp; it never indicates a programming error.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid parameter set (e.g. kappa >= 1, epsilon <= 0).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form result was requested outside the range where it holds.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fiberspin
