#pragma once

#include <stdexcept>
#include <string>

namespace homprobe {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, inconsistent inputs or malformed files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public InvalidArgument {
 public:
  GridMismatch() : InvalidArgument("grid mismatch: operands live on different frequency grids") {}
};

/// Grid too coarse to resolve a requested pulse.
class ResolutionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A quantity is mathematically undefined or a numerical bound failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UndefinedVisibility : public NumericalError {
 public:
  UndefinedVisibility() : NumericalError("undefined visibility: R_C(0)=0") {}
};

/// Truncated coherent-state tail exceeds the configured tolerance.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, int suggested_n_max)
      : NumericalError(what), suggested_n_max_(suggested_n_max) {}

  int suggested_n_max() const noexcept { return suggested_n_max_; }

 private:
  int suggested_n_max_;
};

/// Broken internal invariant (a bug, not bad input).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace homprobe
