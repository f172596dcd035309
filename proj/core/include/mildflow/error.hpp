#pragma once

#include <stdexcept>
#include <string>

namespace mildflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad resolution, negative time, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace mildflow
