#pragma once

#include <stdexcept>
#include <string>

namespace mirrork {

/// Malformed or inconsistent input (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the supported size/rank envelope (CLI exit code 3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal cross-check failed. Always a bug (CLI exit code 4).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mirrork
