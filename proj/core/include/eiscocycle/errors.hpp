#pragma once

#include <stdexcept>
#include <string>

namespace eisc {

// Base class for every error raised by the library.  The subclasses name the
// distinct failure signals so callers can react to them selectively.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A certified error bound could not be met at the requested precision.
class PrecisionUnderflow : public Error {
 public:
  using Error::Error;
};

// A matrix that must be invertible is singular, exactly or numerically.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// A pairing <x, column> that appears in a denominator vanished.
class DivisionByZero : public Error {
 public:
  using Error::Error;
};

// The unit regulator is indistinguishable from zero.
class DegenerateRegulator : public Error {
 public:
  using Error::Error;
};

// An enumeration box cannot be certified to contain every candidate.
class BoxIncomplete : public Error {
 public:
  using Error::Error;
};

// Instance data is malformed or violates an arithmetic invariant.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

}  // namespace eisc
