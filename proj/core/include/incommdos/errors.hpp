#pragma once

#include <stdexcept>
#include <string>

namespace incomm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBasis : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InsufficientSample : public Error {
 public:
  using Error::Error;
};

/// Hopping metadata is inconsistent with the hopping values (e.g. divergent row sums).
class ModelValidation : public Error {
 public:
  using Error::Error;
};

/// The assembled matrix is not Hermitian before symmetrization.
class ModelInconsistency : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class MissingDof : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared in a numerical recursion or evaluation.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class OutOfWindow : public Error {
 public:
  using Error::Error;
};

}  // namespace incomm
