#include "bilag/errors.hpp"

namespace bilag {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  std::string where = line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column)
                               : "column " + std::to_string(column);
  return where + ": " + message;
}

std::string summarize(const std::vector<Issue>& issues) {
  std::string out = "validation failed";
  for (const auto& issue : issues) {
    out += "\n  " + issue.condition;
    if (!issue.detail.empty()) out += ": " + issue.detail;
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)), reason_(message), line_(line), column_(column) {}

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

}  // namespace bilag
