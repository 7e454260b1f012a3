#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stimkb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based (0 when not line oriented),
/// `column` is a 0-based byte offset within the line or query string.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Data that parses but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Lookup of a name or key that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// An operation called outside its contract (bad arguments, wrong mode).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace stimkb
