#pragma once

#include <stdexcept>
#include <string>

namespace pitchblur {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or configuration: the caller supplied something that
/// violates a documented contract. The CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace pitchblur
