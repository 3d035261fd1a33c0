#pragma once

#include <stdexcept>
#include <string>

namespace downcross {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the state space of the model, or an ordering
/// precondition (e.g. y < w < z) does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The diffusion coefficient a(x) evaluated to a non-positive value.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its budget before meeting the tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A scale-function value does not fit in a double even after shifting.
class OverflowPolicyError : public Error {
 public:
  using Error::Error;
};

/// The down-crossing criterion requires a diffusion transient to +infinity.
class NotTransientError : public Error {
 public:
  using Error::Error;
};

/// The tail fit is too close to the convergence boundary to extrapolate.
class IndeterminateTail : public Error {
 public:
  using Error::Error;
};

/// Too few uncensored samples for a distribution comparison.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace downcross
