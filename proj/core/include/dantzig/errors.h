#pragma once

#include <stdexcept>
#include <string>

namespace dantzig {

// Malformed or degenerate input data (shape mismatch, non-finite entries,
// zero columns under a scaling normalization, unparsable files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical trouble: degenerate sensitivity, LP failures, iteration caps.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LpIterationLimitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSensitivityError : public NumericalError {
 public:
  DegenerateSensitivityError()
      : NumericalError("sensitivity degenerate; c undefined") {}
  using NumericalError::NumericalError;
};

}  // namespace dantzig
