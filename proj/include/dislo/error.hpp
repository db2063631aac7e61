#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dislo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input parameters or configuration; maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// A proven discrete estimate failed at runtime; maps to CLI exit code 1.
class BoundViolation : public Error {
 public:
  BoundViolation(std::string bound, const std::string& detail)
      : Error("bound violated: " + bound + " (" + detail + ")"), bound_(std::move(bound)) {}

  const std::string& bound() const noexcept { return bound_; }

 private:
  std::string bound_;
};

/// Fixed-point iteration or other numerical procedure did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dislo
