#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ozrisk {

/// Invalid configuration or parameter values. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data (ozone series, activity template). Carries the
/// 1-based line number when the problem is tied to a file line.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Failure while running a simulation (rejection cap hit, per-person errors).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ozrisk
