#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indm {

/// Malformed input text. Carries the 1-based line number of the offending line.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Well-formed input that violates a structural invariant (self-loop, unknown vertex).
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Precondition of a rule or table operation was not met by the caller.
class contract_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace indm
