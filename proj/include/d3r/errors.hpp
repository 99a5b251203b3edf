#pragma once

#include <stdexcept>
#include <string>

namespace d3r {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input is not computed by a circuit of the requested shape (or the
// learner could not find one within its search space).
class NotInClass : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DecodeFailure : public Error {
 public:
  using Error::Error;
};

class FieldTooSmall : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t line, size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

}  // namespace d3r
