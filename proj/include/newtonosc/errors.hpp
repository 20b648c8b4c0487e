#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newtonosc {

/// Malformed phase or option text; `position` is a byte offset into the input.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A phase with no admissible terms where a nontrivial one is required.
class EmptyPhaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A geometric query outside its domain (point outside the polyhedron, foreign face, ...).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical procedure preconditions not met (too few samples, singular regression, ...).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace newtonosc
