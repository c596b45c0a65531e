#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biclique {

/// Arithmetic outside the domain of an operation (inverse of zero, χ(0), ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A structure violates one of its invariants (partition overlap, bad block, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a configured resource budget (field size, enumeration count, time).
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace biclique
