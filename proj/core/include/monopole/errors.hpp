#pragma once

#include <stdexcept>
#include <string>

namespace monopole {

/// Invalid user-supplied parameters (bad m, non-positive couplings, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public SolverError {
 public:
  enum class Reason { StepUnderflow, StepLimit, NonFinite };

  IntegrationError(Reason reason, const std::string& what)
      : SolverError(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace monopole
