#pragma once

#include <stdexcept>
#include <string>

namespace autfn {

  // Base class for every error raised by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  class RankMismatch : public Error {
   public:
    using Error::Error;
  };

  // A documented precondition of an operation was violated.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    using Error::Error;
  };

  // Raised when a claimed identity does not hold, or when uncertified data
  // reaches an operation that requires a certificate.
  class CertificationError : public Error {
   public:
    using Error::Error;
  };

  // A run configuration is invalid (unknown family, n < 3, ...).
  class ConfigError : public Error {
   public:
    using Error::Error;
  };

}  // namespace autfn
