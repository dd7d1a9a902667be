#pragma once

#include <stdexcept>
#include <string>

namespace firerisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or schema.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Array extents or grids that must agree do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A stored artifact is corrupt, truncated or inconsistent with its header.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Malformed delimited text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace firerisk
