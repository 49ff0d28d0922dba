#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdikit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or a violated operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed model specification (hard validation failure).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state produced by the integrator.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Population or event count exceeded the configured hard cap.
class ExplosionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdikit
