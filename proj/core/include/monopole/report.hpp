#pragma once

// Deterministic CSV and JSON output of solves.

#include <ostream>
#include <string>
#include <vector>

#include "monopole/profile.hpp"
#include "monopole/shooting.hpp"

namespace monopole::report {

/// printf "%.17g".
std::string format_double(double x);

inline constexpr const char* kCsvHeader = "s,tau,r,K,U,res_eq1,res_eq2";

void write_profile_csv(std::ostream& os, const profile::Profile& p);

struct Gate {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string limit;  ///< human-readable acceptance range
};

struct ResidualMax {
  double eq1 = 0.0;
  double eq2 = 0.0;
  double quadrature = 0.0;  ///< sup |U - U_quad|
};

/// Residual maxima over interior samples (both ends excluded).
ResidualMax residual_max(const profile::Profile& p, const profile::AsymptoticsReport& rep);

/// Invariant gates checked after a solve: monotonicity, interior ranges,
/// residuals, exponent windows and the charge.
std::vector<Gate> evaluate_gates(const profile::Profile& p,
                                 const profile::AsymptoticsReport& rep);

bool all_passed(const std::vector<Gate>& gates);

/// JSON summary with top-level keys params, shooting, asymptotics,
/// charge_energy, residual_max, gates.
std::string summary_json(const shooting::ShootingResult& res, const profile::Profile& p,
                         const profile::AsymptoticsReport& rep,
                         const std::vector<Gate>& gates, int indent = 2);

/// Single JSON document holding the summary plus the sample table.
std::string profile_json(const shooting::ShootingResult& res, const profile::Profile& p,
                         const profile::AsymptoticsReport& rep,
                         const std::vector<Gate>& gates, int indent = 2);

/// {"error": {"kind": ..., "message": ...}} on one line.
std::string error_json(const std::string& kind, const std::string& message);

}  // namespace monopole::report
