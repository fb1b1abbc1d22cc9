#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fmdn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad radius, angle out of range...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A scenario description is inconsistent. `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Solver or quadrature failure. Carries a free-form diagnostic trace.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::vector<std::string> diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// A delay was requested for a queue at or past saturation.
class InstabilityError : public Error {
 public:
  InstabilityError(int uav, const std::string& what) : Error(what), uav_(uav) {}
  int uav() const noexcept { return uav_; }

 private:
  int uav_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmdn
