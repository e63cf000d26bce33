#pragma once

#include <stdexcept>
#include <string>

namespace lpplspec {

// Malformed or unacceptable input data (files, configs, argument values).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically degenerate input: an estimator or solver cannot proceed.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lpplspec
