#pragma once

// Monopole profile (K, U) on a uniform grid in s = ln(tau), rebuilt from a
// shooting solution.
//
//   f = K^2 = e^G,  G = Q(V),  U = -V'(s) e^{-3s} / 2,  tau = e^s,  r = tau / a
//
// with s the physical coordinate (solver coordinate minus s0), chosen so
// that U -> 1 at infinity.

#include <optional>
#include <vector>

#include "monopole/shooting.hpp"

namespace monopole::profile {

struct ModelParams {
  double g = 1.0;
  double h0 = 1.0;
  double a = 0.0;  ///< (2 g^2 H0 / 3)^{1/3}

  /// Throws ConfigError unless g > 0 and H0 > 0.
  static ModelParams make(double g, double h0);
};

enum class Branch { Plus, Minus };

struct Sample {
  double s = 0.0;
  double tau = 0.0;
  double r = 0.0;
  double K = 0.0;
  double U = 0.0;
  double G = 0.0;  ///< ln K^2, kept because K underflows long before G does
  double res_eq1 = 0.0;
  double res_eq2 = 0.0;
};

struct Profile {
  std::vector<Sample> samples;
  double ds = 0.0;
  double n_star = 0.0;
  double sigma_inf = 0.0;
  double s0 = 0.0;
  ModelParams model;
  Branch branch = Branch::Plus;
};

struct ReconstructOptions {
  int grid = 2000;
  /// The grid ends where ln K reaches this value (K ~ 1e-250 by default).
  double log_k_floor = -575.0;
  /// Explicit physical s range; must lie inside the solved domain.
  std::optional<double> s_lo;
  std::optional<double> s_hi;

  void validate() const;
};

/// Throws SolverError if V >= -1 at an interior sample or the requested
/// range leaves the solved domain.
Profile reconstruct(const shooting::ShootingResult& result, const ModelParams& model,
                    const ReconstructOptions& options = {});

/// Fills res_eq1, res_eq2: relative residuals of
///   K U + (1 - K^2) K_tau / tau^2 = 0,   U_tau = (1 - K^2)^2 / tau^4,
/// each normalized by the larger of its two terms. Derivatives are taken
/// in s with 7-point stencils, on G rather than K.
void compute_residuals(Profile& profile);

/// U rebuilt as 1 - int_tau^inf (1 - K^2)^2 / t^4 dt. The part beyond the
/// grid is e^{-3 s_hi} / 3, which assumes K is negligible there.
std::vector<double> u_by_quadrature(const Profile& profile);

/// Mirror solution U -> -U.
Profile with_branch(Profile profile, Branch branch);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  std::size_t count = 0;
};

struct FitOptions {
  double far_decades = 0.25;
  double near_decades = 1.5;
  std::size_t min_points = 8;
};

struct AsymptoticsReport {
  PowerFit k_far;   ///< ln(-ln K) vs ln tau
  PowerFit u_far;   ///< ln(1 - U) vs ln tau
  PowerFit k_near;  ///< ln(1 - K) vs ln tau
  PowerFit u_near;  ///< ln U vs ln tau
  double exp_K_far = 0.0;   ///< expect 3
  double exp_U_far = 0.0;   ///< exponent of tau^{-p} in 1 - U, expect 3
  double exp_K_near = 0.0;  ///< expect 2
  double exp_U_near = 0.0;  ///< expect 1
  double C_est = 0.0;       ///< -ln K ~ C tau^3 + b over the far window
  double C_offset = 0.0;
  double quad_error = 0.0;  ///< sup |U - U_quad|
  double psi = 0.0;
  double energy = 0.0;
};

/// Throws SolverError when a window holds fewer than min_points samples or
/// the fitted quantity is not monotone there.
AsymptoticsReport fit_asymptotics(const Profile& profile, const FitOptions& options = {});

struct ChargeEnergy {
  double psi = 0.0;
  double energy = 0.0;
};

/// Psi = U (1 - K^2)^2 at the far end, E = 16 pi^2 H0 |Psi| / g^2. Throws
/// SolverError when |U| is not within 1e-2 of 1 there.
ChargeEnergy charge_and_energy(const Profile& profile, const ModelParams& model);

}  // namespace monopole::profile
