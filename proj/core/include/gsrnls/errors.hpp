#pragma once

#include <stdexcept>
#include <string>

namespace gsrnls {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Unsupported image format or malformed file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Operands have incompatible shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside its valid domain.
class ParamError : public Error {
 public:
  using Error::Error;
};

} // namespace gsrnls
