#pragma once

// Dynamical shooting for V'' - 3V' = R(V), V(-inf) = -1, V(+inf) = -inf.
//
// For fixed V(0) = m < -1 the slope n in V'(0) = -n is classified by the
// fate of the reversed problem (t = -s)
//
//   V_tt + 3 V_t = R(V),  V(0) = m,  V_t(0) = n,
//
// as Minus (V_t turns negative), Plus (V_t stays positive and V crosses -1)
// or, for the single admissible slope, neither. Bisection on n between a
// Minus and a Plus slope converges to that slope.
//
// All trajectories store the offset w = V + 1 in OdeState::y so that the
// approach to the equilibrium keeps full relative precision.

#include <optional>
#include <span>
#include <vector>

#include "monopole/integrator.hpp"

namespace monopole::shooting {

struct ShootingParams {
  double m = -2.0;
  std::optional<double> n_hint;
  double t_max = 12.0;
  double s_max = 20.0;
  double bisect_tol = 1e-12;
  double v_eq_tol = 1e-8;
  /// Forward integration stops once |V| exceeds this bound.
  double overflow_bound = 1e10;
  /// Relative divergence between the bracketing trajectories tolerated at
  /// the point where the stable-manifold continuation takes over.
  double tail_match_tol = 1e-10;
  /// Largest relative size of the part of sigma beyond the forward horizon.
  double sigma_tail_tol = 1e-9;
  int max_expansions = 64;
  int max_bisections = 200;
  ode::IntegratorConfig ode;

  /// Throws ConfigError. Checks everything except m.
  void validate() const;
};

enum class Verdict { Minus, Plus, Inconclusive };

enum class Evidence { SlopeNegative, CrossedEquilibrium, ReachedHorizon };

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  Evidence evidence = Evidence::ReachedHorizon;
  double t = 0.0;  ///< location of the deciding event, or t_max
  double w = 0.0;  ///< V + 1 at that location
};

enum class Axis { Reversed, Forward };

struct Trajectory {
  Axis axis = Axis::Forward;
  /// x is t (reversed) or s (forward); y = V + 1; yp = dy/dx.
  std::vector<ode::OdeState> points;

  double v(std::size_t i) const { return points[i].y - 1.0; }
  bool empty() const { return points.empty(); }
};

struct Bracket {
  double n_lo = 0.0;
  double n_hi = 0.0;
  Classification lo;
  Classification hi;
};

/// Where and how the backward solution switches from the shooting
/// trajectory to the stable-manifold continuation.
struct StableTail {
  double t_match = 0.0;
  double seed_depth = 0.0;      ///< -(V+1) of the continuation seed at t_max
  double slope_mismatch = 0.0;  ///< relative jump of V_t at t_match
};

struct ShootingResult {
  double m = 0.0;
  double n_star = 0.0;
  double sigma_inf = 0.0;
  double s0 = 0.0;
  double bracket_width = 0.0;
  double sigma_tail = 0.0;  ///< estimated relative sigma beyond s_end
  double s_end = 0.0;       ///< forward extent in solver s
  int bisections = 0;
  bool converged_inconclusive = false;
  Bracket bracket;
  StableTail tail;
  Trajectory backward;
  Trajectory forward;
  ShootingParams params;
};

/// Right-hand sides in the offset variable w = V + 1.
ode::Derivative reversed_rhs(const ode::OdeState& st);
ode::Derivative forward_rhs(const ode::OdeState& st);

/// Throws ConfigError for m >= -1 or when t_max ends far from the
/// equilibrium without a deciding event.
Classification classify(double m, double n, const ShootingParams& params);

/// Returns n_lo (Minus) < n_hi (Plus) by geometric expansion. When an
/// Inconclusive slope turns up during the search, n_lo == n_hi.
Bracket find_bracket(double m, const ShootingParams& params);

/// Bracket, bisect, continue the backward tail, integrate forward and
/// normalize.
ShootingResult bisect(double m, const ShootingParams& params);

inline ShootingResult solve(const ShootingParams& params) {
  return bisect(params.m, params);
}

/// V'' - 3V' = R(V) from (m, -n_star) until |V| exceeds the overflow bound
/// or s_max.
Trajectory solve_forward(double m, double n_star, const ShootingParams& params);

struct SigmaShift {
  double sigma_inf = 0.0;
  double s0 = 0.0;
  double tail = 0.0;  ///< (2/3) e^{-3 s_end} / (n + sigma_inf)
};

/// sigma(s) = -V'(s) e^{-3s} - n along the forward trajectory nodes.
std::vector<double> sigma_profile(const Trajectory& forward, double n_star);

/// Throws SolverError when the forward horizon is too short for sigma to
/// have converged.
SigmaShift sigma_and_shift(const Trajectory& forward, double n_star,
                           const ShootingParams& params);

struct StitchedSample {
  double s = 0.0;  ///< solver coordinate
  double w = 0.0;  ///< V + 1
  double dw_ds = 0.0;
};

/// The stitched solution at ascending solver coordinates in
/// [-t_max, s_end]. Each value is an integrator step endpoint.
std::vector<StitchedSample> sample_stitched(const ShootingResult& result,
                                            std::span<const double> s_points);

/// Solver coordinate s* with V_b(s*) = V_a(0), so V_a(s) = V_b(s + s*).
double translation_shift(const ShootingResult& a, const ShootingResult& b);

struct TranslationCheck {
  double shift = 0.0;
  double sup_diff = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

/// sup |V_a(s) - V_b(s + s*)| over the common domain where |V_a| <= v_cap.
TranslationCheck translation_discrepancy(const ShootingResult& a,
                                         const ShootingResult& b, int grid = 2000,
                                         double v_cap = 1e3);

}  // namespace monopole::shooting
