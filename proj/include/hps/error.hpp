#pragma once

#include <stdexcept>
#include <string>

namespace hps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidOrder : public Error {
 public:
  using Error::Error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// Sampled coefficients fail the ellipticity spot check, or the operator uses
/// a feature the corner-free discretization cannot represent.
class InvalidOperator : public Error {
 public:
  using Error::Error;
};

/// A dense block that must be inverted is singular (or numerically so).
class FactorizationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too few usable data points for a fit or an extrapolation.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// A time-stepped solution stopped being finite.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

}  // namespace hps
