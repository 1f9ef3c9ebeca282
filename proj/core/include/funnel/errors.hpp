#pragma once

#include <stdexcept>
#include <string>

namespace funnel {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a closed-form expression (e.g. rho below kRhoMin).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadrature error estimate or oracle check exceeded its tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// An integrand or intermediate result was NaN or infinite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Wigner function too close to zero for the acceleration ratio G/W.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double w, double w_scale)
      : Error(what), w_(w), w_scale_(w_scale) {}
  double w() const { return w_; }
  double w_scale() const { return w_scale_; }

 private:
  double w_;
  double w_scale_;
};

// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two trajectories compared on different time grids.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// Scenario name not in the preset table.
class UnknownScenario : public Error {
 public:
  using Error::Error;
};

}  // namespace funnel
