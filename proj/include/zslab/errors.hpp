#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace zslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisibilityError : public Error {
 public:
  using Error::Error;
};

class GroupMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Raised when a search exceeds its node, time or size budget. Carries the
/// progress made before the abort so callers can emit a partial report.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what, std::uint64_t nodes_visited = 0,
                       std::uint64_t partial_results = 0)
      : Error(what), nodes_visited_(nodes_visited), partial_results_(partial_results) {}

  std::uint64_t nodes_visited() const noexcept { return nodes_visited_; }
  std::uint64_t partial_results() const noexcept { return partial_results_; }

 private:
  std::uint64_t nodes_visited_;
  std::uint64_t partial_results_;
};

}  // namespace zslab
