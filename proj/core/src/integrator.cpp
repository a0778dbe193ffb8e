#include "monopole/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monopole/errors.hpp"

namespace monopole::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Step-size controller (PI variant).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kMaxGrow = 5.0;     // per accepted step
constexpr double kMaxShrink = 10.0;  // per accepted step
constexpr double kMaxRejectShrink = 5.0;

struct Trial {
  OdeState end;
  Derivative end_deriv;
  double err_y = 0.0;
  double err_yp = 0.0;
};

OdeState advance(const OdeState& s, double h, double dy, double dyp) {
  return {s.x + h, s.y + h * dy, s.yp + h * dyp};
}

// Stage abscissa x + c h, increments h * sum(a k).
OdeState stage(const OdeState& s, double c, double h, double dy, double dyp) {
  return {s.x + c * h, s.y + h * dy, s.yp + h * dyp};
}

// One Dormand-Prince step. k1 is the derivative at `s` (FSAL).
Trial dp_step(const Rhs& rhs, const OdeState& s, const Derivative& k1, double h) {
  const Derivative k2 = rhs(stage(s, c2, h, a21 * k1.dy, a21 * k1.dyp));
  const Derivative k3 =
      rhs(stage(s, c3, h, a31 * k1.dy + a32 * k2.dy, a31 * k1.dyp + a32 * k2.dyp));
  const Derivative k4 = rhs(stage(s, c4, h, a41 * k1.dy + a42 * k2.dy + a43 * k3.dy,
                                  a41 * k1.dyp + a42 * k2.dyp + a43 * k3.dyp));
  const Derivative k5 =
      rhs(stage(s, c5, h, a51 * k1.dy + a52 * k2.dy + a53 * k3.dy + a54 * k4.dy,
                a51 * k1.dyp + a52 * k2.dyp + a53 * k3.dyp + a54 * k4.dyp));
  const Derivative k6 = rhs(stage(
      s, 1.0, h, a61 * k1.dy + a62 * k2.dy + a63 * k3.dy + a64 * k4.dy + a65 * k5.dy,
      a61 * k1.dyp + a62 * k2.dyp + a63 * k3.dyp + a64 * k4.dyp + a65 * k5.dyp));
  const double dy =
      a71 * k1.dy + a73 * k3.dy + a74 * k4.dy + a75 * k5.dy + a76 * k6.dy;
  const double dyp =
      a71 * k1.dyp + a73 * k3.dyp + a74 * k4.dyp + a75 * k5.dyp + a76 * k6.dyp;
  Trial t;
  t.end = advance(s, h, dy, dyp);
  t.end_deriv = rhs(t.end);
  const Derivative& k7 = t.end_deriv;
  t.err_y = h * (e1 * k1.dy + e3 * k3.dy + e4 * k4.dy + e5 * k5.dy + e6 * k6.dy +
                 e7 * k7.dy);
  t.err_yp = h * (e1 * k1.dyp + e3 * k3.dyp + e4 * k4.dyp + e5 * k5.dyp +
                  e6 * k6.dyp + e7 * k7.dyp);
  return t;
}

bool finite(const OdeState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.yp);
}

double initial_step(const Rhs& rhs, const OdeState& s, const Derivative& f0,
                    double dir, const IntegratorConfig& cfg) {
  const double sk_y = cfg.abs_tol + cfg.rel_tol * std::abs(s.y);
  const double sk_yp = cfg.abs_tol + cfg.rel_tol * std::abs(s.yp);
  const double dnf = 0.5 * (std::pow(f0.dy / sk_y, 2) + std::pow(f0.dyp / sk_yp, 2));
  const double dny = 0.5 * (std::pow(s.y / sk_y, 2) + std::pow(s.yp / sk_yp, 2));
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, cfg.max_step);
  const OdeState s1 = advance(s, dir * h, f0.dy, f0.dyp);
  const Derivative f1 = rhs(s1);
  const double der2 =
      std::sqrt(0.5 * (std::pow((f1.dy - f0.dy) / sk_y, 2) +
                       std::pow((f1.dyp - f0.dyp) / sk_yp, 2))) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                   : std::pow(0.01 / der12, 0.2);
  h = std::min({100.0 * h, h1, cfg.max_step});
  return std::max(h, cfg.min_step);
}

bool crossed(double g0, double g1, Crossing dir) {
  const bool rising = g0 <= 0.0 && g1 > 0.0;
  const bool falling = g0 >= 0.0 && g1 < 0.0;
  switch (dir) {
    case Crossing::Rising: return rising;
    case Crossing::Falling: return falling;
    case Crossing::Any: return rising || falling;
  }
  return false;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  if (!(min_step > 0.0) || !(min_step <= max_step)) {
    throw ConfigError("integrator steps must satisfy 0 < min_step <= max_step");
  }
  if (max_steps <= 0) throw ConfigError("integrator max_steps must be positive");
}

OdeState hermite(const OdeState& a, const Derivative& da, const OdeState& b,
                 const Derivative& db, double x) {
  const double h = b.x - a.x;
  if (h == 0.0) return a;
  const double t = (x - a.x) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return {x, h00 * a.y + h10 * h * da.dy + h01 * b.y + h11 * h * db.dy,
          h00 * a.yp + h10 * h * da.dyp + h01 * b.yp + h11 * h * db.dyp};
}

Solution integrate(const Rhs& rhs, const OdeState& init, double x_end,
                   const IntegratorConfig& cfg, const EventSpec& events,
                   std::span<const double> landing) {
  cfg.validate();
  if (!(x_end != init.x) || !std::isfinite(x_end)) {
    throw ConfigError("integrate: x_end must differ from the initial abscissa");
  }
  if (!finite(init)) {
    throw IntegrationError(IntegrationError::Reason::NonFinite,
                           "integrate: non-finite initial state");
  }
  const double dir = x_end > init.x ? 1.0 : -1.0;
  const double span = std::abs(x_end - init.x);

  Solution sol;
  sol.nodes.push_back(init);

  std::size_t next_land = 0;
  // Landing points at (or behind) the start are sampled immediately.
  while (next_land < landing.size() && dir * (landing[next_land] - init.x) <= 0.0) {
    OdeState s = init;
    s.x = landing[next_land];
    if (landing[next_land] != init.x) {
      throw ConfigError("integrate: landing point behind the initial abscissa");
    }
    sol.samples.push_back(s);
    ++next_land;
  }
  for (std::size_t i = next_land; i + 1 < landing.size(); ++i) {
    if (dir * (landing[i + 1] - landing[i]) < 0.0) {
      throw ConfigError("integrate: landing points must be sorted along the direction");
    }
  }

  OdeState cur = init;
  Derivative fcur = rhs(cur);
  std::vector<double> gcur(events.events.size());
  for (std::size_t i = 0; i < gcur.size(); ++i) gcur[i] = events.events[i].fn(cur);

  double h = initial_step(rhs, cur, fcur, dir, cfg);
  double facold = 1e-4;
  bool last_rejected = false;
  long attempts = 0;

  while (dir * (x_end - cur.x) > 0.0) {
    if (++attempts > cfg.max_steps) {
      throw IntegrationError(IntegrationError::Reason::StepLimit,
                             "integrate: step limit exhausted at x = " +
                                 std::to_string(cur.x));
    }
    // Clip to the next landing point or the end of the interval.
    double target = x_end;
    bool landing_step = false;
    if (next_land < landing.size() && dir * (landing[next_land] - x_end) < 0.0) {
      target = landing[next_land];
      landing_step = true;
    }
    double h_try = h;
    bool clipped = false;
    if (h_try >= std::abs(target - cur.x) * (1.0 - 1e-12) ||
        std::abs(target - cur.x) - h_try < 1e-12 * span) {
      h_try = std::abs(target - cur.x);
      clipped = true;
    }

    Trial trial = dp_step(rhs, cur, fcur, dir * h_try);
    if (clipped) trial.end.x = target;

    const double sk_y = cfg.abs_tol +
                        cfg.rel_tol * std::max(std::abs(cur.y), std::abs(trial.end.y));
    const double sk_yp = cfg.abs_tol +
                         cfg.rel_tol * std::max(std::abs(cur.yp), std::abs(trial.end.yp));
    const double err = std::sqrt(
        0.5 * (std::pow(trial.err_y / sk_y, 2) + std::pow(trial.err_yp / sk_yp, 2)));

    if (!std::isfinite(err) || !finite(trial.end) ||
        !std::isfinite(trial.end_deriv.dy) || !std::isfinite(trial.end_deriv.dyp)) {
      ++sol.rejected_steps;
      h = 0.2 * h_try;
      last_rejected = true;
      if (h < cfg.min_step) {
        throw IntegrationError(IntegrationError::Reason::NonFinite,
                               "integrate: non-finite state near x = " +
                                   std::to_string(cur.x));
      }
      continue;
    }

    const double fac11 = std::pow(err, kExpo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, kMaxShrink);
      double h_new = h_try / fac;
      facold = std::max(err, 1e-4);
      if (last_rejected) h_new = std::min(h_new, h_try);
      last_rejected = false;
      // A shortened step says little about the natural step size unless the
      // controller asks for an even shorter one.
      if (clipped && h_new >= h_try) h_new = std::max(h, h_new);
      h = std::min(h_new, cfg.max_step);
      ++sol.accepted_steps;

      const OdeState prev = cur;
      const Derivative fprev = fcur;
      cur = trial.end;
      fcur = trial.end_deriv;

      // Events: find the earliest triggered crossing in this step.
      bool stop = false;
      if (!events.events.empty()) {
        std::vector<EventHit> hits;
        for (std::size_t i = 0; i < events.events.size(); ++i) {
          const Event& ev = events.events[i];
          const double g1 = ev.fn(cur);
          if (crossed(gcur[i], g1, ev.direction)) {
            double lo = prev.x;
            double hi = cur.x;
            double glo = gcur[i];
            const double tol = events.tolerance * std::max(1.0, std::abs(cur.x));
            for (int it = 0; it < 200 && std::abs(hi - lo) > tol; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double gm = ev.fn(hermite(prev, fprev, cur, fcur, mid));
              if (crossed(glo, gm, ev.direction)) {
                hi = mid;
              } else {
                lo = mid;
                glo = gm;
              }
            }
            hits.push_back({i, hermite(prev, fprev, cur, fcur, hi)});
          }
          gcur[i] = g1;
        }
        std::sort(hits.begin(), hits.end(), [dir](const EventHit& a, const EventHit& b) {
          return dir * a.state.x < dir * b.state.x;
        });
        for (const EventHit& hit : hits) {
          sol.events.push_back(hit);
          if (events.events[hit.index].terminal) {
            stop = true;
            break;
          }
        }
      }
      if (stop) {
        sol.nodes.push_back(sol.events.back().state);
        sol.stopped_by_event = true;
        return sol;
      }
      sol.nodes.push_back(cur);
      if (clipped && landing_step) {
        sol.samples.push_back(cur);
        ++next_land;
        while (next_land < landing.size() && landing[next_land] == cur.x) {
          sol.samples.push_back(cur);
          ++next_land;
        }
      }
    } else {
      ++sol.rejected_steps;
      h = h_try / std::min(kMaxRejectShrink, fac11 / kSafety);
      last_rejected = true;
      if (h < cfg.min_step) {
        throw IntegrationError(IntegrationError::Reason::StepUnderflow,
                               "integrate: step size underflow at x = " +
                                   std::to_string(cur.x));
      }
    }
  }
  // Landing points exactly at x_end.
  while (next_land < landing.size() && landing[next_land] == cur.x) {
    sol.samples.push_back(cur);
    ++next_land;
  }
  return sol;
}

OdeState integrate_fixed(const Rhs& rhs, const OdeState& init, double x_end,
                         long steps) {
  if (steps <= 0) throw ConfigError("integrate_fixed: steps must be positive");
  const double h = (x_end - init.x) / static_cast<double>(steps);
  OdeState cur = init;
  Derivative f = rhs(cur);
  for (long i = 0; i < steps; ++i) {
    Trial t = dp_step(rhs, cur, f, h);
    cur = t.end;
    cur.x = init.x + static_cast<double>(i + 1) * h;
    f = t.end_deriv;
  }
  return cur;
}

OrderEstimate convergence_order(const Rhs& rhs, const OdeState& init, double x_end,
                                double tol, const OdeState* reference) {
  OdeState ref;
  if (reference != nullptr) {
    ref = *reference;
  } else {
    IntegratorConfig tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-15;
    tight.max_step = std::abs(x_end - init.x);
    ref = integrate(rhs, init, x_end, tight).final_state();
  }
  IntegratorConfig cfg;
  cfg.rel_tol = tol;
  cfg.abs_tol = tol * 1e-2;
  cfg.max_step = std::abs(x_end - init.x);
  const Solution adaptive = integrate(rhs, init, x_end, cfg);
  const long n = std::max<long>(adaptive.accepted_steps, 4);

  auto error = [&](const OdeState& s) {
    return std::max(std::abs(s.y - ref.y), std::abs(s.yp - ref.yp));
  };
  OrderEstimate est;
  est.steps_coarse = n;
  est.error_coarse = error(integrate_fixed(rhs, init, x_end, n));
  est.error_fine = error(integrate_fixed(rhs, init, x_end, 2 * n));
  est.order = std::log2(est.error_coarse / est.error_fine);
  return est;
}

}  // namespace monopole::ode
