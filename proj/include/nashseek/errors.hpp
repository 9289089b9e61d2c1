#pragma once

#include <stdexcept>
#include <string>

namespace nashseek {

// Sizes of vectors handed to an operation do not match the game or graph.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scenario or game description is malformed. `key()` names the offending
// config path when one exists.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Iterative solver gave up before reaching its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double residual)
      : std::runtime_error(message + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// A state or derivative became non-finite (or left the divergence bound).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& message, double time, long index,
                  std::string slice = {})
      : std::runtime_error(message), time_(time), index_(index), slice_(std::move(slice)) {}

  double time() const { return time_; }
  // Flat state index of the first offending entry, or -1 if unknown.
  long index() const { return index_; }
  const std::string& slice() const { return slice_; }

 private:
  double time_;
  long index_;
  std::string slice_;
};

}  // namespace nashseek
