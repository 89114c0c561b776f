#pragma once

#include <stdexcept>

namespace cbank {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State outside the validity region of the banking model: hull touching or
/// beyond a bank, or heading at the transverse singularity.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content (bad number, bad row).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Missing or unknown column/key in a structured file.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Sway/yaw added-mass matrix is not invertible.
class SingularMassError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbank
