#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nacap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sign or ordering could not be certified at the configured precision.
/// Rerunning with a larger window (or inversion depth) may resolve it.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// An operation's documented precondition does not hold for its input.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A computation needed vertices beyond the materialized horizon of a graph
/// that has no generator to extend it.
class HorizonExhausted : public PreconditionFailed {
 public:
  using PreconditionFailed::PreconditionFailed;
};

/// Division by an exact zero, or evaluation of a rational function at a pole.
class DomainError : public PreconditionFailed {
 public:
  using PreconditionFailed::PreconditionFailed;
};

/// Malformed literal or spec text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace nacap
