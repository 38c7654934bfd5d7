#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace namelogic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Reference to an undeclared state, agent, name or proposition, or a
/// structurally broken model file.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Formula uses a modality the requested operation has no semantics or
/// procedure for (e.g. D or B in the closure).
class UnsupportedFragment : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace namelogic
