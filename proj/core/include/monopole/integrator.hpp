#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace monopole::ode {

/// Point on a trajectory of a two-component first-order system.
struct OdeState {
  double x = 0.0;
  double y = 0.0;
  double yp = 0.0;
};

struct Derivative {
  double dy = 0.0;
  double dyp = 0.0;
};

using Rhs = std::function<Derivative(const OdeState&)>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  double min_step = 1e-14;
  long max_steps = 2'000'000;

  /// Throws ConfigError if any field is out of range.
  void validate() const;
};

enum class Crossing { Rising, Falling, Any };

struct Event {
  std::string name;
  std::function<double(const OdeState&)> fn;
  Crossing direction = Crossing::Any;
  bool terminal = true;
};

struct EventSpec {
  std::vector<Event> events;
  /// Width below which the bisection on the interpolant stops, scaled by
  /// max(1, |x|).
  double tolerance = 1e-12;
};

struct EventHit {
  std::size_t index = 0;
  OdeState state;
};

struct Solution {
  /// Accepted step endpoints, starting with the initial state. When a
  /// terminal event fires the last node is the located event state.
  std::vector<OdeState> nodes;
  /// States at the requested landing points, in request order. Each one is a
  /// genuine step endpoint, not an interpolated value.
  std::vector<OdeState> samples;
  std::vector<EventHit> events;
  bool stopped_by_event = false;
  long accepted_steps = 0;
  long rejected_steps = 0;

  const OdeState& final_state() const { return nodes.back(); }
};

/// Adaptive Dormand-Prince 5(4) integration from `init` toward `x_end`.
///
/// `landing` lists abscissae (sorted along the direction of integration)
/// that the stepper must hit exactly; their states are returned in
/// `Solution::samples`. Events are checked after every accepted step and
/// located by bisection on the cubic Hermite interpolant.
///
/// Throws IntegrationError on step-size underflow, step-count exhaustion or
/// a non-finite state.
Solution integrate(const Rhs& rhs, const OdeState& init, double x_end,
                   const IntegratorConfig& cfg, const EventSpec& events = {},
                   std::span<const double> landing = {});

/// Same tableau with `steps` equal steps and no error control.
OdeState integrate_fixed(const Rhs& rhs, const OdeState& init, double x_end,
                         long steps);

/// Cubic Hermite interpolation between two states with their derivatives.
OdeState hermite(const OdeState& a, const Derivative& da, const OdeState& b,
                 const Derivative& db, double x);

struct OrderEstimate {
  double order = 0.0;
  double error_coarse = 0.0;
  double error_fine = 0.0;
  long steps_coarse = 0;
};

/// Observed order of the propagated solution: the adaptive run at `tol`
/// fixes a mean step h, then fixed-step runs with h and h/2 are compared
/// against `reference` (or against an adaptive run at rel_tol 1e-13 when no
/// reference is given).
OrderEstimate convergence_order(const Rhs& rhs, const OdeState& init,
                                double x_end, double tol = 1e-7,
                                const OdeState* reference = nullptr);

}  // namespace monopole::ode
