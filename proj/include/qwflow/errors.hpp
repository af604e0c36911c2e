#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qwflow {

// Base class for all qwflow errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An index (vertex, edge endpoint, map entry) outside its valid range.
struct IndexError : Error {
  using Error::Error;
};

// Mismatched vector or matrix shapes.
struct DimensionError : Error {
  using Error::Error;
};

// A structurally invalid argument (zero internal dimension, unsupported
// option combination, ...).
struct InvalidArgumentError : Error {
  using Error::Error;
};

// A vector that should be a probability distribution is not.
struct NormalizationError : Error {
  using Error::Error;
};

// U'U deviates from the identity (or Kraus completeness fails).
struct UnitarityError : Error {
  UnitarityError(const std::string& what, double deviation)
      : Error(what), max_deviation(deviation) {}
  double max_deviation;
};

// A matrix entry is nonzero where the graph has no edge from -> to.
struct EdgeViolationError : Error {
  EdgeViolationError(const std::string& what, int from_, int to_)
      : Error(what), from(from_), to(to_) {}
  int from;
  int to;
};

// No valid flow exists for the supplied (P, P', E).
struct InfeasibleError : Error {
  using Error::Error;
};

// A cut that violates the preconditions of the projector argument.
struct InvalidCutError : Error {
  using Error::Error;
};

// Instance too large for brute-force enumeration.
struct SizeError : Error {
  using Error::Error;
};

// Malformed input document.
struct ParseError : Error {
  using Error::Error;
};

namespace detail {

inline std::string num(double value) {
  std::ostringstream oss;
  oss << value;
  return oss.str();
}

}  // namespace detail

}  // namespace qwflow
