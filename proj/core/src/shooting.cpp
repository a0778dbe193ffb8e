#include "monopole/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "monopole/errors.hpp"
#include "monopole/transforms.hpp"

namespace monopole::shooting {

namespace {

using ode::OdeState;

void check_m(double m) {
  if (!(m < -1.0) || !std::isfinite(m)) {
    throw ConfigError("shooting: m must be a finite value below -1, got " +
                      std::to_string(m));
  }
}

// The stable continuation runs through |V+1| spanning tens of decades, so
// its error control is purely relative.
ode::IntegratorConfig tail_config(const ShootingParams& p) {
  ode::IntegratorConfig cfg = p.ode;
  cfg.abs_tol = 1e-300;
  return cfg;
}

// Point on the decaying eigendirection of the linearization at w.
OdeState stable_seed(double t, double depth) {
  const double w = -depth;
  const double rp = transforms::rhs_r_derivative_offset(w);
  const double lambda = 0.5 * (-3.0 - std::sqrt(9.0 + 4.0 * rp));
  return {t, w, lambda * w};
}

// Integrates through the given landing points (sorted along the direction
// of integration) and returns their states.
std::vector<OdeState> run_with_landing(const ode::Rhs& rhs, const OdeState& init,
                                       const std::vector<double>& landing,
                                       const ode::IntegratorConfig& cfg) {
  if (landing.empty()) return {};
  if (landing.back() == init.x) {
    std::vector<OdeState> out(landing.size(), init);
    return out;
  }
  ode::Solution sol = ode::integrate(rhs, init, landing.back(), cfg, {}, landing);
  if (sol.samples.size() != landing.size()) {
    throw SolverError("sample_stitched: integrator missed landing points");
  }
  return std::move(sol.samples);
}

double forward_cap(const ShootingResult& r, double v_cap) {
  const auto& pts = r.forward.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].y - 1.0 < -v_cap) return pts[i - 1].x;
  }
  return r.s_end;
}

}  // namespace

void ShootingParams::validate() const {
  if (!(t_max > 0.0) || t_max > 150.0) throw ConfigError("t_max must lie in (0, 150]");
  if (!(s_max > 0.0)) throw ConfigError("s_max must be positive");
  if (!(bisect_tol > 0.0)) throw ConfigError("bisect_tol must be positive");
  if (!(v_eq_tol > 0.0)) throw ConfigError("v_eq_tol must be positive");
  if (!(overflow_bound > 1.0)) throw ConfigError("overflow_bound must exceed 1");
  if (!(tail_match_tol > 0.0 && tail_match_tol < 1.0)) {
    throw ConfigError("tail_match_tol must lie in (0, 1)");
  }
  if (!(sigma_tail_tol > 0.0)) throw ConfigError("sigma_tail_tol must be positive");
  if (max_expansions <= 0 || max_bisections <= 0) {
    throw ConfigError("iteration caps must be positive");
  }
  if (n_hint && !(*n_hint > 0.0)) throw ConfigError("n_hint must be positive");
  ode.validate();
}

ode::Derivative reversed_rhs(const OdeState& st) {
  return {st.yp, transforms::rhs_r_offset(st.y) - 3.0 * st.yp};
}

ode::Derivative forward_rhs(const OdeState& st) {
  return {st.yp, transforms::rhs_r_offset(st.y) + 3.0 * st.yp};
}

Classification classify(double m, double n, const ShootingParams& params) {
  check_m(m);
  if (std::isnan(n)) throw ConfigError("classify: n is NaN");
  // V_t(0) <= 0: negative at once, or immediately after t = 0 since
  // V_tt(0) = R(m) < 0.
  if (!(n > 0.0)) return {Verdict::Minus, Evidence::SlopeNegative, 0.0, m + 1.0};

  ode::EventSpec events;
  events.events.push_back(
      {"slope_negative", [](const OdeState& s) { return s.yp; }, ode::Crossing::Falling, true});
  events.events.push_back(
      {"crossed_equilibrium", [](const OdeState& s) { return s.y; }, ode::Crossing::Rising, true});

  const ode::Solution sol =
      ode::integrate(reversed_rhs, {0.0, m + 1.0, n}, params.t_max, params.ode, events);
  if (sol.stopped_by_event) {
    const ode::EventHit& hit = sol.events.back();
    if (hit.index == 0) {
      return {Verdict::Minus, Evidence::SlopeNegative, hit.state.x, hit.state.y};
    }
    return {Verdict::Plus, Evidence::CrossedEquilibrium, hit.state.x, hit.state.y};
  }
  const OdeState& end = sol.final_state();
  if (std::abs(end.y) < params.v_eq_tol) {
    return {Verdict::Inconclusive, Evidence::ReachedHorizon, end.x, end.y};
  }
  throw ConfigError("classify: reached t_max = " + std::to_string(params.t_max) +
                    " with |V + 1| = " + std::to_string(std::abs(end.y)) +
                    " and no deciding event; t_max is too small");
}

Bracket find_bracket(double m, const ShootingParams& params) {
  check_m(m);
  Bracket br;
  br.n_lo = 0.0;
  br.lo = classify(m, 0.0, params);
  br.n_hi = 1.0;
  if (params.n_hint) {
    const double guess_lo = 0.9 * *params.n_hint;
    const Classification c = classify(m, guess_lo, params);
    if (c.verdict == Verdict::Minus) {
      br.n_lo = guess_lo;
      br.lo = c;
      br.n_hi = 1.1 * *params.n_hint;
    } else if (c.verdict == Verdict::Plus) {
      br.n_hi = guess_lo;
    } else {
      return {guess_lo, guess_lo, c, c};
    }
  }
  for (int k = 0; k < params.max_expansions; ++k) {
    const Classification c = classify(m, br.n_hi, params);
    switch (c.verdict) {
      case Verdict::Plus:
        br.hi = c;
        return br;
      case Verdict::Inconclusive:
        return {br.n_hi, br.n_hi, c, c};
      case Verdict::Minus:
        br.n_lo = br.n_hi;
        br.lo = c;
        br.n_hi *= 2.0;
        break;
    }
  }
  throw SolverError("find_bracket: no Plus slope found after " +
                    std::to_string(params.max_expansions) + " doublings for m = " +
                    std::to_string(m));
}

Trajectory solve_forward(double m, double n_star, const ShootingParams& params) {
  check_m(m);
  if (!(n_star > 0.0)) throw ConfigError("solve_forward: n_star must be positive");
  const double bound = params.overflow_bound;
  ode::EventSpec events;
  events.events.push_back({"overflow",
                           [bound](const OdeState& s) { return (s.y - 1.0) + bound; },
                           ode::Crossing::Falling, true});
  ode::Solution sol =
      ode::integrate(forward_rhs, {0.0, m + 1.0, -n_star}, params.s_max, params.ode, events);
  Trajectory traj{Axis::Forward, std::move(sol.nodes)};
  for (const OdeState& p : traj.points) {
    const double vpp = 3.0 * p.yp + transforms::rhs_r_offset(p.y);
    if (!(p.y < 0.0 && p.yp < 0.0 && vpp < 0.0)) {
      throw SolverError("solve_forward: lost V < -1, V' < 0, V'' < 0 at s = " +
                        std::to_string(p.x));
    }
  }
  return traj;
}

std::vector<double> sigma_profile(const Trajectory& forward, double n_star) {
  std::vector<double> sigma;
  sigma.reserve(forward.points.size());
  for (const OdeState& p : forward.points) {
    sigma.push_back(-p.yp * std::exp(-3.0 * p.x) - n_star);
  }
  return sigma;
}

SigmaShift sigma_and_shift(const Trajectory& forward, double n_star,
                           const ShootingParams& params) {
  if (forward.points.size() < 2) throw SolverError("sigma_and_shift: empty trajectory");
  const OdeState& end = forward.points.back();
  SigmaShift out;
  out.sigma_inf = -end.yp * std::exp(-3.0 * end.x) - n_star;
  // Beyond s_end, (1 - e^Q)^2 = 1 to double precision, so the rest of the
  // sigma integral is 2 * int_{s_end}^inf e^{-3s} ds.
  out.tail = (2.0 / 3.0) * std::exp(-3.0 * end.x) / (n_star + out.sigma_inf);
  if (out.tail > params.sigma_tail_tol) {
    throw SolverError("sigma_and_shift: sigma tail not converged at s_end = " +
                      std::to_string(end.x) + " (remaining fraction " +
                      std::to_string(out.tail) + "); increase s_max");
  }
  out.s0 = -std::log((n_star + out.sigma_inf) / 2.0) / 3.0;
  return out;
}

ShootingResult bisect(double m, const ShootingParams& params) {
  check_m(m);
  params.validate();
  ShootingResult res;
  res.m = m;
  res.params = params;
  res.params.m = m;

  Bracket br = find_bracket(m, params);
  bool inconclusive = br.n_lo == br.n_hi;
  double n_star = br.n_lo;
  int it = 0;
  while (!inconclusive && br.n_hi - br.n_lo > params.bisect_tol) {
    if (it >= params.max_bisections) {
      throw SolverError("bisect: iteration cap reached with bracket width " +
                        std::to_string(br.n_hi - br.n_lo));
    }
    const double mid = br.n_lo + 0.5 * (br.n_hi - br.n_lo);
    if (mid <= br.n_lo || mid >= br.n_hi) break;
    const Classification c = classify(m, mid, params);
    ++it;
    if (c.verdict == Verdict::Minus) {
      br.n_lo = mid;
      br.lo = c;
    } else if (c.verdict == Verdict::Plus) {
      br.n_hi = mid;
      br.hi = c;
    } else {
      n_star = mid;
      inconclusive = true;
    }
  }
  if (!inconclusive) n_star = br.n_lo + 0.5 * (br.n_hi - br.n_lo);
  if (!(n_star > 0.0)) throw SolverError("bisect: converged slope is not positive");

  res.n_star = n_star;
  res.bracket = br;
  res.bracket_width = br.n_hi - br.n_lo;
  res.bisections = it;
  res.converged_inconclusive = inconclusive;

  // The reversed problem amplifies slope errors like e^{t} while the wanted
  // solution decays like e^{-4t}; the bracketing trajectories stay within
  // tail_match_tol of each other (relative) until about
  // t_event - (|ln tol| + ln 4) / 5.
  const double t_div =
      inconclusive ? params.t_max : std::min(br.lo.t, br.hi.t);
  const double margin = (std::abs(std::log(params.tail_match_tol)) + std::log(4.0)) / 5.0;
  res.tail.t_match = std::clamp(t_div - margin, 0.0, params.t_max);

  const OdeState start{0.0, m + 1.0, n_star};
  res.backward.axis = Axis::Reversed;
  OdeState at_match = start;
  if (res.tail.t_match > 0.0) {
    ode::Solution sol = ode::integrate(reversed_rhs, start, res.tail.t_match, params.ode);
    res.backward.points = std::move(sol.nodes);
    at_match = res.backward.points.back();
  } else {
    res.backward.points.push_back(start);
  }
  if (!(at_match.y < 0.0)) {
    throw SolverError("bisect: backward trajectory left V < -1 before the match point");
  }

  if (res.tail.t_match < params.t_max) {
    const ode::IntegratorConfig cfg = tail_config(params);
    const double span = params.t_max - res.tail.t_match;
    const double target = std::log(-at_match.y);
    auto end_log = [&](double u) {
      const ode::Solution s = ode::integrate(reversed_rhs, stable_seed(params.t_max, std::exp(u)),
                                             res.tail.t_match, cfg);
      return s;
    };
    double u = target - 4.0 * span;
    double u_prev = 0.0;
    double g_prev = 0.0;
    bool have_prev = false;
    ode::Solution tail_sol;
    bool matched = false;
    for (int k = 0; k < 60; ++k) {
      tail_sol = end_log(u);
      const double wend = tail_sol.final_state().y;
      if (!(wend < 0.0)) throw SolverError("bisect: stable continuation crossed V = -1");
      const double g = std::log(-wend) - target;
      // Step-size selection makes g noisy at the 1e-12 level.
      if (std::abs(g) < 1e-2 * params.tail_match_tol) {
        matched = true;
        break;
      }
      double slope = 1.0;
      if (have_prev && u != u_prev) {
        const double sl = (g - g_prev) / (u - u_prev);
        if (std::isfinite(sl) && sl > 0.1) slope = sl;
      }
      u_prev = u;
      g_prev = g;
      have_prev = true;
      u -= g / slope;
    }
    if (!matched) throw SolverError("bisect: stable continuation did not match");
    res.tail.seed_depth = std::exp(u);
    const OdeState& joined = tail_sol.final_state();
    res.tail.slope_mismatch = std::abs(joined.yp - at_match.yp) / std::abs(at_match.yp);
    const auto& nodes = tail_sol.nodes;
    for (auto it_node = nodes.rbegin() + 1; it_node != nodes.rend(); ++it_node) {
      res.backward.points.push_back(*it_node);
    }
  }

  res.forward = solve_forward(m, n_star, params);
  const SigmaShift ss = sigma_and_shift(res.forward, n_star, params);
  res.sigma_inf = ss.sigma_inf;
  res.s0 = ss.s0;
  res.sigma_tail = ss.tail;
  res.s_end = res.forward.points.back().x;
  return res;
}

std::vector<StitchedSample> sample_stitched(const ShootingResult& result,
                                            std::span<const double> s_points) {
  const ShootingParams& p = result.params;
  const double t_match = result.tail.t_match;
  for (std::size_t i = 0; i < s_points.size(); ++i) {
    const double s = s_points[i];
    if (!(s >= -p.t_max && s <= result.s_end)) {
      throw ConfigError("sample_stitched: s = " + std::to_string(s) +
                        " outside the solved domain");
    }
    if (i > 0 && s < s_points[i - 1]) {
      throw ConfigError("sample_stitched: points must be ascending");
    }
  }

  std::vector<double> tail_t;   // decreasing t
  std::vector<double> shoot_t;  // increasing t
  std::vector<double> fwd_s;    // increasing s
  for (double s : s_points) {
    if (s >= 0.0) {
      fwd_s.push_back(s);
    } else if (-s > t_match) {
      tail_t.push_back(-s);
    } else {
      shoot_t.push_back(-s);
    }
  }
  std::reverse(shoot_t.begin(), shoot_t.end());

  std::vector<StitchedSample> out;
  out.reserve(s_points.size());
  const auto tail = run_with_landing(reversed_rhs, stable_seed(p.t_max, result.tail.seed_depth),
                                     tail_t, tail_config(p));
  for (const OdeState& st : tail) out.push_back({-st.x, st.y, -st.yp});

  const auto shoot =
      run_with_landing(reversed_rhs, {0.0, result.m + 1.0, result.n_star}, shoot_t, p.ode);
  for (auto it = shoot.rbegin(); it != shoot.rend(); ++it) {
    out.push_back({-it->x, it->y, -it->yp});
  }

  const auto fwd =
      run_with_landing(forward_rhs, {0.0, result.m + 1.0, -result.n_star}, fwd_s, p.ode);
  for (const OdeState& st : fwd) out.push_back({st.x, st.y, st.yp});

  // Restore the caller's exact abscissae (t = -s round trips exactly, but
  // keep the contract explicit).
  for (std::size_t i = 0; i < out.size(); ++i) out[i].s = s_points[i];
  return out;
}

double translation_shift(const ShootingResult& a, const ShootingResult& b) {
  const double target = a.m + 1.0;  // V_a(0) = m_a, stored as V + 1
  auto w_at = [&](double s) {
    const double pts[1] = {s};
    return sample_stitched(b, pts).front().w;
  };
  // Bracket on b's stored nodes (V is decreasing in s), then bisect on
  // exact samples.
  std::vector<std::pair<double, double>> nodes;
  for (auto it = b.backward.points.rbegin(); it != b.backward.points.rend(); ++it) {
    nodes.emplace_back(-it->x, it->y);
  }
  for (const OdeState& p : b.forward.points) nodes.emplace_back(p.x, p.y);
  double lo = -b.params.t_max;
  double hi = b.s_end;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].second <= target) {
      lo = nodes[i - 1].first;
      hi = nodes[i].first;
      break;
    }
  }
  if (!(w_at(lo) >= target && w_at(hi) <= target)) {
    throw SolverError("translation_shift: could not bracket V_b = m_a");
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (w_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TranslationCheck translation_discrepancy(const ShootingResult& a, const ShootingResult& b,
                                         int grid, double v_cap) {
  if (grid < 2) throw ConfigError("translation_discrepancy: grid must be at least 2");
  TranslationCheck out;
  out.shift = translation_shift(a, b);
  const double margin = 1e-9;
  out.s_lo = std::max(-a.params.t_max, -b.params.t_max - out.shift) + margin;
  out.s_hi = std::min(forward_cap(a, v_cap), forward_cap(b, v_cap) - out.shift) - margin;
  if (!(out.s_hi > out.s_lo)) throw SolverError("translation_discrepancy: empty overlap");
  std::vector<double> sa(static_cast<std::size_t>(grid));
  std::vector<double> sb(sa.size());
  for (int i = 0; i < grid; ++i) {
    sa[i] = out.s_lo + (out.s_hi - out.s_lo) * i / (grid - 1);
    sb[i] = sa[i] + out.shift;
  }
  const auto va = sample_stitched(a, sa);
  const auto vb = sample_stitched(b, sb);
  for (std::size_t i = 0; i < va.size(); ++i) {
    out.sup_diff = std::max(out.sup_diff, std::abs(va[i].w - vb[i].w));
  }
  return out;
}

}  // namespace monopole::shooting
