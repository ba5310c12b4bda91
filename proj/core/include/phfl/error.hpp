#pragma once

#include <stdexcept>
#include <string>

namespace phfl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Structurally valid input that violates a semantic invariant
/// (undeclared names, duplicates, indices out of range).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  TypeError(const std::string& rule, const std::string& subterm, const std::string& msg)
      : Error(msg + " [rule: " + rule + "] in: " + subterm), rule_(rule), subterm_(subterm) {}
  const std::string& rule() const { return rule_; }
  const std::string& subterm() const { return subterm_; }

 private:
  std::string rule_;
  std::string subterm_;
};

/// Evaluation refused because an enumeration would exceed a configured bound.
class LatticeTooLarge : public Error {
 public:
  using Error::Error;
};

/// The demand-driven solver exceeded its iteration cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace phfl
