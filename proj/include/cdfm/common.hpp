#pragma once

#include <stdexcept>
#include <string>

namespace cdfm {

// Thrown on invalid configurations, malformed inputs, or precondition
// violations. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a numerical routine fails to converge or produces an
// unusable result (quadrature, eigensolver, rejection cap). Exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// File-system / parsing failures. Exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cdfm
