#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pvinspect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        message_(what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }
  /// Message without the line suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

/// Raised by the adaptive Canny loop when the threshold floor is reached
/// without enough edge pixels.
class FeaturelessImageError : public Error {
 public:
  using Error::Error;
};

/// Failure of a detector invocation; `diagnostics()` holds captured output.
class DetectorError : public Error {
 public:
  DetectorError(const std::string& what, std::string diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace pvinspect
