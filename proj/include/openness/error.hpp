#pragma once

#include <stdexcept>
#include <string>

namespace openness {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content does not follow the expected format (bad raster, unknown class id, bad CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but violates an operation's precondition
/// (no interior pixels, zero grid nodes, constant series, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace openness
