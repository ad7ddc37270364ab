#pragma once

#include <stdexcept>
#include <string>

namespace carbon {

// Root of every exception the engine throws. The C API maps each subclass
// onto one status code, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Root finder did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or configuration file content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A time step produced values outside the admissible band (CFL violation).
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Terminal payoff requested for a connecting mechanism the scheme does not use.
class MechanismError : public Error {
 public:
  using Error::Error;
};

// Stored allowance surfaces do not cover a requested time.
class MissingAllowanceError : public Error {
 public:
  using Error::Error;
};

// Grids that cannot be compared or coupled node by node.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace carbon
