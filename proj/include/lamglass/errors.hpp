#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamglass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a numerical routine (negative time, non-positive step, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the validity range of a model (e.g. WLF pole).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. Carries the offending field name.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Failure of the saddle-point factorization.
class LinearSolverError : public Error {
 public:
  LinearSolverError(long pivot, const std::string& message)
      : Error(message), pivot_(pivot) {}
  /// Index of the failing pivot, or -1 when the factorization did not report one.
  long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

struct ResidualPair {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Newton iterations did not reach the residual tolerances.
class NonconvergenceError : public Error {
 public:
  NonconvergenceError(const std::string& message, std::vector<ResidualPair> trace, long step = -1)
      : Error(message), trace_(std::move(trace)), step_(step) {}

  const std::vector<ResidualPair>& trace() const noexcept { return trace_; }
  /// Index of the failing time step; -1 when raised outside a time history.
  long step() const noexcept { return step_; }

 private:
  std::vector<ResidualPair> trace_;
  long step_;
};

}  // namespace lamglass
