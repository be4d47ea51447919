#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace fridge {

/// Base class for all errors raised by this library.
class FridgeError : public std::runtime_error {
 public:
  explicit FridgeError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition: bad order, negative entry, index out of range,
/// malformed configuration, invalid range.
class InvalidInputError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// Input is numerically degenerate for the requested operation
/// (e.g. backward recursion on entries below the positivity floor,
/// constant columns in standardization).
class DegenerateInputError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// A non-finite value appeared where the recursion guarantees finiteness.
class OverflowError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// A dense linear solve failed (singular or indefinite system).
class LinearAlgebraError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// Iterative solver produced a non-finite objective. Carries the last
/// finite iterate so callers can inspect where things went wrong.
class DivergenceError : public FridgeError {
 public:
  DivergenceError(const std::string& what, Eigen::VectorXd last_finite)
      : FridgeError(what), last_finite_iterate(std::move(last_finite)) {}

  Eigen::VectorXd last_finite_iterate;
};

/// CSV cell could not be parsed as a number.
class ParseError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// File structure does not match the expected schema
/// (missing response column, missing header, ...).
class SchemaError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

/// Signal-to-noise calibration is impossible (zero signal).
class CalibrationError : public FridgeError {
 public:
  using FridgeError::FridgeError;
};

}  // namespace fridge
