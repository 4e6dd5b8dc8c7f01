#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace angenent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (too few points, bad tau, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative solve hit its iteration cap or stalled above tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// An iterate (or the solution) left the open half-plane r > 0.
class LeftHalfPlane : public Error {
 public:
  using Error::Error;
};

/// A linear solve failed because a pivot block was singular.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// Wraps a shooting failure with the index of the step that failed.
class ShootingError : public Error {
 public:
  ShootingError(std::size_t step, const std::string& what)
      : Error("shooting step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace angenent
