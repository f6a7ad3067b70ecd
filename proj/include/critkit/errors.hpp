#pragma once

#include <stdexcept>
#include <string>

namespace critkit {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Shape mismatch or out-of-range index in a linear-algebra call.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: duplicate entries, non-monotone offsets,
/// NaN/Inf values, negative cross sections, and similar construction-time
/// violations.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable external file (matrix, cross-section library, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; carries the offending line when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what_arg, int line = 0)
      : Error(line > 0 ? what_arg + " (line " + std::to_string(line) + ")"
                       : what_arg),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Numerically singular operation: zero pivot or zero diagonal.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Partition request that cannot be satisfied (more parts than rows).
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// Problem with no usable solution, e.g. an eigensolve with a zero fission
/// source or a closure update at a vanishing flux.
class DegenerateProblemError : public Error {
 public:
  using Error::Error;
};

}  // namespace critkit
