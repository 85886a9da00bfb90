#pragma once

#include <stdexcept>
#include <string>

namespace qicost {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested dimension exceeds the configured cap.
struct DimCapError : Error {
  explicit DimCapError(const std::string& msg) : Error(msg) {}
};

/// Invalid argument (bad register set, probability out of range, ...).
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// A stated precondition of an operation does not hold.
struct ContractError : Error {
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

/// Density operator trace is not 1 within tolerance.
struct NormalizationError : Error {
  explicit NormalizationError(const std::string& msg) : Error(msg) {}
};

/// Density operator has an eigenvalue below the clipping window.
struct PositivityError : Error {
  explicit PositivityError(const std::string& msg) : Error(msg) {}
};

/// File could not be parsed into a valid object.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace qicost
