#pragma once

#include <stdexcept>
#include <string>

namespace latkick {

/// Base class for all latkick failures.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Rejected inputs: bad parameters, malformed configs, mismatched objects.
/// The CLI maps these to exit code 2.
class validation_error : public error {
 public:
  explicit validation_error(const std::string& what) : error(what) {}
};

/// A basis (or similar object) would exceed the configured size cap.
/// The request needs a bigger machine, not a bug fix.
class dimension_error : public validation_error {
 public:
  explicit dimension_error(const std::string& what) : validation_error(what) {}
};

/// Iterative numerics failed to converge or hit a pathological regime.
/// The CLI maps these to exit code 3.
class numerical_error : public error {
 public:
  explicit numerical_error(const std::string& what) : error(what) {}
};

}  // namespace latkick
