#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smpc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario / controller configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite plant state. `step` is the controller step index, or -1 when
/// raised outside a scenario run.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::int64_t step = -1)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

enum class SolverErrorKind {
  kNotPositiveDefinite,
  kDimensionMismatch,
  kInvalidArgument,
  kEmptyFeasibleSet,
  kHorizonTooLarge,
};

class SolverError : public Error {
 public:
  SolverError(SolverErrorKind kind, const std::string& what, int pivot = -1)
      : Error(what), kind_(kind), pivot_(pivot) {}
  SolverErrorKind kind() const noexcept { return kind_; }
  /// Failing pivot for kNotPositiveDefinite, -1 otherwise.
  int pivot() const noexcept { return pivot_; }

 private:
  SolverErrorKind kind_;
  int pivot_;
};

}  // namespace smpc
