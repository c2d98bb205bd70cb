#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collapse {

/// Input outside the mathematical domain of an operation (non-finite angle,
/// probability outside [0,1], entropy above ln 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The contour tracer produced something it cannot have produced for a
/// well-posed instance. Carries a human-readable diagnostic.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boolean expression text could not be parsed. `position` is the 0-based
/// character offset of the offending token.
class SyntaxError : public std::invalid_argument {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::invalid_argument(what), position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A memory variable index exceeds the declared memory depth, or two
/// expressions with different depths are mixed.
class ArityError : public std::invalid_argument {
 public:
  ArityError(const std::string& what, std::size_t position = 0)
      : std::invalid_argument(what), position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Memory depth above the supported cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An outcome decision needs more history than was supplied.
class HistoryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A requested evaluation mode does not exist for the given input.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace collapse
