#pragma once

#include <stdexcept>
#include <string>

namespace sphereppw {

/// Base class for every numerical failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on caller-supplied data was violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The ODE integrator could not advance (step underflow or non-finite state).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_theta)
      : Error(what + " (last theta reached: " + std::to_string(last_theta) + ")"),
        last_theta_(last_theta) {}
  double last_theta() const noexcept { return last_theta_; }

 private:
  double last_theta_;
};

/// u_m keeps one sign on the whole search interval.
class NoZeroInRange : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue bracketing ran out of expansion steps.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Mesh input is degenerate or violates a geometric requirement.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// The weighted first moment v(y) vanished, so every frame is centred.
class VanishingMoment : public Error {
 public:
  using Error::Error;
};

}  // namespace sphereppw
