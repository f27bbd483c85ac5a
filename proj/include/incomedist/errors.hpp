#pragma once

#include <stdexcept>
#include <string>

namespace incomedist {

/// Malformed input text (files, config values). CLI exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition or parameter invariant does not hold. CLI exit code 3.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, non-finite state. CLI exit code 4.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace incomedist
