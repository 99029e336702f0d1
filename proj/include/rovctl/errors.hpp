#pragma once

#include <stdexcept>
#include <string>

namespace rovctl {

/// Raised when an argument violates an operation's preconditions.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Control gain b(x) is zero, so the generic law cannot be inverted.
class SingularGain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite derivative or runaway tracking error during integration.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration key is unknown, malformed, or out of range.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace rovctl
