#pragma once

#include <stdexcept>
#include <string>

namespace zk {

/// Bad input: a grid, coefficient set, config value or call argument that
/// violates a documented constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested an operation outside the implemented set (derivative orders,
/// interpolation cases, ...).
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure during integration: non-finite values or runaway growth.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace zk
