#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Base of every error the library throws. The CLI maps the subclasses onto
/// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration values, malformed meshes, bad arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Mesh topology or geometry violates a structural invariant.
class MeshError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A numerical step failed (singular matrix, source on the surface, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
