#pragma once

#include <stdexcept>
#include <string>

namespace lehmerlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// gcd(n, q) > 1 where a unit was required.
class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A table limit or enumeration budget would be exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Floating accumulation drifted too far to round to an exact answer.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lehmerlab
