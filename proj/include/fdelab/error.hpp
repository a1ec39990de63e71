#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdelab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input too short (mesh, grid function, table).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An operation had nothing left to report (e.g. every node masked).
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

/// Requested accuracy could not be reached. Carries the best value found.
class AccuracyLossError : public Error {
 public:
  AccuracyLossError(const std::string& what, double best_value, double error_bound)
      : Error(what), best_value_(best_value), error_bound_(error_bound) {}

  double best_value() const noexcept { return best_value_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_value_;
  double error_bound_;
};

/// A time-stepping scheme produced a non-finite value or left its valid region.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t last_good_index)
      : Error(what), last_good_index_(last_good_index) {}

  std::size_t last_good_index() const noexcept { return last_good_index_; }

 private:
  std::size_t last_good_index_;
};

/// The curvature operator saturated (|u| reached 1): x' is unbounded.
class GradientBlowupError : public DivergenceError {
 public:
  using DivergenceError::DivergenceError;
};

}  // namespace fdelab
