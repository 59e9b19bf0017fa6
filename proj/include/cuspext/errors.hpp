#pragma once

#include <stdexcept>
#include <string>

namespace cuspext {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the mathematical object
/// (e.g. a profile evaluated at t outside (0, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed call: dimension mismatch, parameter ranges, empty inputs.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An object is in the wrong state for the requested operation
/// (e.g. an unnormalized DomainSpec handed to the bi-Lipschitz map).
class StateError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: non-convergence, NaN/Inf samples.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or input file; messages name the field or row.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cuspext
