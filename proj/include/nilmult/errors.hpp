#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilmult {

/// Precondition violated by an argument (m = 0 for the Moebius function,
/// mismatched dimensions, malformed input text).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured resource cap (basis size, collection word length, Magnus
/// word space) would be exceeded. Never raised for silent truncation.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A group specification fails the hypotheses of the closed-form results.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid group specification";
    for (const auto& item : items) out += "; " + item;
    return out;
  }

  std::vector<std::string> violations_;
};

/// An internal identity that must hold did not: oracle disagreement, a
/// non-integral Witt sum, a basis that fails to span, a negative printed
/// exponent.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nilmult
