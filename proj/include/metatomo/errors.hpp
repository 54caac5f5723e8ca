#pragma once

#include <stdexcept>
#include <string>

namespace metatomo {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong shapes, out-of-range parameters, unsupported options.
/// The CLI maps this family to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A linear polarization pair; the geometric-phase construction cannot
/// reverse its handedness.
class DegeneratePair : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnderdeterminedSystem : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateHistogram : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Numerical failure on valid input. The CLI maps this family to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoSolution : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnreachablePhase : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace metatomo
