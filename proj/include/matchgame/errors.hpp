#pragma once

#include <stdexcept>
#include <string>

namespace matchgame {

// Caller broke a precondition: wrong shapes, variant mismatch, eps <= 0, ...
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Outside options that no strategy profile of the couple can satisfy.
class NoFeasibleAgreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input.  line/column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace matchgame
