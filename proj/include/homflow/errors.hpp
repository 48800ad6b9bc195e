#pragma once

#include <stdexcept>
#include <string>

namespace homflow {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape, symmetry, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unknown geometry tag.
class CatalogError : public Error {
 public:
  using Error::Error;
};

/// A coefficient left the domain where the equations make sense.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation has no meaning for the requested class (no closed form, no soliton, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Requested time window is not covered by the data.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Bad command line or config document. Maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written. Maps to exit status 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace homflow
