#pragma once

#include <stdexcept>
#include <string>

namespace itn {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input stream does not follow the expected layout (header, column count).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A field parsed but violates a domain invariant (negative flow, zero GDP).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Data cannot support the requested computation (empty country set, T = 0).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace itn
