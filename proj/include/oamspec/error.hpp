#pragma once

#include <stdexcept>
#include <string>

namespace oamspec {

// Precondition violations raise std::invalid_argument. The two types below
// mark failures the command-line front end maps onto distinct exit codes.

/// Overflow, failed quadrature, or any other loss of numerical validity.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Undersampled or mismatched θ grids.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oamspec
