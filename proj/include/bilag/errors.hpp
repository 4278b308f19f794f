#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or scene text. `line` is 0 when the input is a single
/// expression; `column` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
  std::size_t line_;
  std::size_t column_;
};

/// An operation was applied outside its domain (chart mismatch, degree
/// overflow, singular frame, division by zero, missing inverse, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The normal form and randomized evaluation disagree. Indicates a bug in the
/// symbolic core, never a user error.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

struct Issue {
  std::string condition;
  std::string detail;
};

/// A geometric object failed certification; carries every failed condition.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

}  // namespace bilag
