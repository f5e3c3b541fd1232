#pragma once

#include <stdexcept>
#include <string>

namespace rectiscan {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A scale or radius falls outside the range the data can support.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The kernel family does not support the requested operation.
class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a documented cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Input data could not be read or is malformed.
class DataError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_range(const std::string& what);

}  // namespace rectiscan
