#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace superjet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different generator tables, charts or ranks.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// An assignment or a value has the wrong Z2-parity.
class ParityError : public Error {
 public:
  using Error::Error;
};

class UnknownGeneratorError : public Error {
 public:
  using Error::Error;
};

/// Structural constraint violated (asymmetric Christoffel symbols, bad tuple, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Domain error for arguments out of range (negative order, bad linear part, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate value or failed iteration in the numeric layer.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Expression or document syntax error; positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace superjet
