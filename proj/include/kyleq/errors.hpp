#pragma once

#include <stdexcept>
#include <string>

namespace kyleq {

/// Invalid model parameter, configuration value, or CLI usage.
class ParamError : public std::invalid_argument {
 public:
  explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Base class for runtime numerical failures.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solver produced values violating a stability guarantee
/// (negative density, mass drift, exploding weight, ...).
class StabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A consistency probe failed beyond tolerance; usually means the grid
/// resolution is insufficient for the requested accuracy.
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// An internal invariant (bound, monotonicity) was violated beyond
/// tolerance. Signals a quadrature or discretization failure.
class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A query fell outside the invertible range of a monotone map.
class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A query fell outside tabulated support.
class ExtrapolationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A persisted artifact does not match its recorded checksum.
class IntegrityError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace kyleq
