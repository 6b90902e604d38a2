#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latitude {

/// Input that violates an operation's preconditions (shape, sign, range).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// constant_factor_alpha hit an entry where the two products coincide.
class DegenerateEntry : public InvalidInput {
 public:
  DegenerateEntry(std::size_t row, std::size_t col)
      : InvalidInput("degenerate entry (" + std::to_string(row) + ", " +
                     std::to_string(col) +
                     "): max-times and standard products are equal"),
        row_(row),
        col_(col) {}

  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// A data value falls outside the interval an operation requires.
class OutOfRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Malformed CSV input; line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latitude
