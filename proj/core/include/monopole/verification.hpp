#pragma once

// Invariant battery behind `monopole verify`.

#include <string>
#include <vector>

#include "monopole/profile.hpp"
#include "monopole/shooting.hpp"

namespace monopole::verification {

struct BatteryConfig {
  /// m is ignored; each criterion picks its own.
  shooting::ShootingParams shooting;
  profile::ModelParams model = profile::ModelParams::make(1.0, 1.0);
  int grid = 2000;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;  ///< measured values or the failure diagnostic
};

/// Runs every criterion; failures are reported, never thrown.
std::vector<CriterionResult> run_battery(const BatteryConfig& cfg);

/// "PASS [id] name: measured" / "FAIL ..."
std::string format_line(const CriterionResult& r);

}  // namespace monopole::verification
