#pragma once

#include <stdexcept>
#include <string>

namespace dephasim {

/// Invalid configuration or input data (bad grids, malformed files,
/// missing config sections). Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to reach its requested tolerance.
/// Carries the best estimate so callers can report diagnostics.
/// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_value, double error_estimate)
      : std::runtime_error(what), best_value(best_value), error_estimate(error_estimate) {}
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what), best_value(0.0), error_estimate(0.0) {}

  double best_value;
  double error_estimate;
};

}  // namespace dephasim
