#pragma once

#include <stdexcept>
#include <string>

namespace urbanmix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (negative wind speed, gap in a
/// weather file, shares not summing to 100 %, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A configuration file is malformed or references something that does not
/// exist (unknown method, missing field).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace urbanmix
