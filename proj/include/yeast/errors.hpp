#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace yeast {

// Invalid argument values: alpha outside (0,1), nonpositive variances,
// empty integration ranges and the like.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to converge or lost accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. Carries the 1-based input line when
// the failure can be attributed to one.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(line ? what + " (line " + std::to_string(*line) + ")" : what), line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

// API misuse, e.g. stepping a monitor past its horizon.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A request that would exceed a hard resource limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace yeast
