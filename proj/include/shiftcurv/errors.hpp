#pragma once

#include <stdexcept>
#include <string>

namespace shiftcurv {

/// Base of every error raised by the library. The CLI maps the concrete
/// type to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad index, malformed input, wrong size.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the geometric domain (r <= 0, origin outside sphere, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of the check being run does not hold on the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, failed root brackets, diverged fits.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds what a brute-force routine is built for.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftcurv
