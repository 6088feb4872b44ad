#pragma once

#include <stdexcept>
#include <string>

namespace dyson {

/// Malformed scenario, unknown check, bad CLI input. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for failures of the numerical pipeline. Maps to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A step produced values below -tol_neg: the grid no longer resolves the density.
class ResolutionError : public NumericalError {
 public:
  ResolutionError(const std::string& what, double time, double min_value)
      : NumericalError(what, time), min_value_(min_value) {}
  double min_value() const noexcept { return min_value_; }

 private:
  double min_value_;
};

/// Non-finite values appeared in the state.
class BlowUpError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dyson
