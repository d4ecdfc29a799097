#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entroscope {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad symbol, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input data; carries the 1-based line of the offending record.
class DataError : public Error {
 public:
  DataError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace entroscope
