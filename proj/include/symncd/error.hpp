#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symncd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (out-of-range parameter, empty input, unknown id).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is the 1-based file line, `row()` the
/// 1-based data row (header lines excluded); either is 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t row, const std::string& what)
      : Error(location(line, row) + what), line_(line), row_(row) {}
  ParseError(std::size_t line, const std::string& what) : ParseError(line, 0, what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t row() const noexcept { return row_; }

 private:
  static std::string location(std::size_t line, std::size_t row) {
    if (line == 0) return {};
    std::string out = "line " + std::to_string(line);
    if (row != 0) out += " (data row " + std::to_string(row) + ")";
    return out + ": ";
  }

  std::size_t line_;
  std::size_t row_;
};

/// Row whose value count disagrees with the declared t*c.
class DimensionError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Value that parsed but violates a data invariant (non-finite reflectivity).
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Compression backend failure.
class CompressionError : public Error {
 public:
  using Error::Error;
};

}  // namespace symncd
