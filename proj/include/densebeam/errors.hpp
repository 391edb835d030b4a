#pragma once

#include <stdexcept>
#include <string>

namespace densebeam {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: parameter files, grids, step sizes, unit tags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unit conversion between tags of different physical dimension.
class DimensionMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A formula that divides by the detuning was evaluated at zero detuning.
class SingularDetuning : public Error {
 public:
  using Error::Error;
};

/// A density-dependent denominator came within the pole guard of zero.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double density)
      : Error(what), density_(density) {}

  double density() const noexcept { return density_; }

 private:
  double density_;
};

/// The wave or Bloch state became NaN/Inf.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

}  // namespace densebeam
