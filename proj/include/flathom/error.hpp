#pragma once

#include <stdexcept>
#include <string>

namespace flathom {

// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix/subspace sizes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operation was called on input violating its precondition
// (degenerate Gram matrix, non-isometry, non-isotropic U0, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input text could not be parsed (bad rational, float entry, missing field).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Results that the theory says must agree did not.
class InternalError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace flathom
