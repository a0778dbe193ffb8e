#include "monopole/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "monopole/errors.hpp"
#include "monopole/numerics.hpp"
#include "monopole/transforms.hpp"

namespace monopole::profile {

namespace {

double branch_sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

// Solver s where the forward solution reaches V = v_floor, or s_end if it
// never does.
double floor_location(const shooting::ShootingResult& res, double v_floor) {
  const auto& pts = res.forward.points;
  const double w_floor = v_floor + 1.0;
  std::size_t i = 0;
  while (i < pts.size() && pts[i].y > w_floor) ++i;
  if (i == pts.size()) return pts.back().x;
  if (i == 0) return pts.front().x;
  const ode::OdeState& a = pts[i - 1];
  const ode::OdeState& b = pts[i];
  const ode::Derivative da = shooting::forward_rhs(a);
  const ode::Derivative db = shooting::forward_rhs(b);
  double lo = a.x;
  double hi = b.x;
  for (int k = 0; k < 100 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (ode::hermite(a, da, b, db, mid).y > w_floor) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

struct Window {
  std::vector<double> x;
  std::vector<double> y;
  double tau_lo = 0.0;
  double tau_hi = 0.0;
};

PowerFit fit_window(const Window& w, const char* what, std::size_t min_points) {
  if (w.x.size() < min_points) {
    throw SolverError(std::string("fit_asymptotics: ") + what + " window holds " +
                      std::to_string(w.x.size()) + " points, need " +
                      std::to_string(min_points));
  }
  const bool up = w.y.back() > w.y.front();
  for (std::size_t i = 1; i < w.y.size(); ++i) {
    if (up ? !(w.y[i] > w.y[i - 1]) : !(w.y[i] < w.y[i - 1])) {
      throw SolverError(std::string("fit_asymptotics: ") + what +
                        " is not monotone in its window");
    }
  }
  const numerics::LineFit lf = numerics::fit_line(w.x, w.y);
  return {lf.slope, lf.intercept, lf.rms, w.tau_lo, w.tau_hi, lf.count};
}

}  // namespace

ModelParams ModelParams::make(double g, double h0) {
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("model: g must be positive");
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("model: H0 must be positive");
  ModelParams p;
  p.g = g;
  p.h0 = h0;
  p.a = std::cbrt(2.0 * g * g * h0 / 3.0);
  return p;
}

void ReconstructOptions::validate() const {
  if (grid < 16) throw ConfigError("profile: grid must have at least 16 points");
  if (!(log_k_floor < 0.0) || !std::isfinite(log_k_floor)) {
    throw ConfigError("profile: log_k_floor must be negative");
  }
  if (s_lo && s_hi && !(*s_lo < *s_hi)) throw ConfigError("profile: need s_lo < s_hi");
}

Profile reconstruct(const shooting::ShootingResult& result, const ModelParams& model,
                    const ReconstructOptions& options) {
  options.validate();
  if (result.forward.empty() || result.backward.empty()) {
    throw ConfigError("profile: shooting result has no trajectories");
  }
  const double s0 = result.s0;
  const double dom_lo = -result.params.t_max;
  const double dom_hi = result.s_end;

  double lo = dom_lo;
  double hi = floor_location(result, 2.0 * options.log_k_floor);
  if (options.s_lo) lo = *options.s_lo + s0;
  if (options.s_hi) hi = *options.s_hi + s0;
  const double slack = 1e-12 * std::max(1.0, std::abs(dom_hi - dom_lo));
  if (lo < dom_lo - slack || hi > dom_hi + slack) {
    throw SolverError("profile: requested range leaves the solved domain [" +
                      std::to_string(dom_lo - s0) + ", " + std::to_string(dom_hi - s0) +
                      "]");
  }
  lo = std::max(lo, dom_lo);
  hi = std::min(hi, dom_hi);
  if (!(lo < hi)) throw SolverError("profile: empty range");

  const auto n = static_cast<std::size_t>(options.grid);
  const double ds = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + ds * static_cast<double>(i);
  grid.back() = hi;

  const std::vector<shooting::StitchedSample> raw = shooting::sample_stitched(result, grid);

  Profile p;
  p.ds = ds;
  p.n_star = result.n_star;
  p.sigma_inf = result.sigma_inf;
  p.s0 = s0;
  p.model = model;
  p.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const shooting::StitchedSample& r = raw[i];
    if (!(r.w < 0.0)) {
      throw SolverError("profile: V >= -1 at solver s = " + std::to_string(r.s));
    }
    Sample& smp = p.samples[i];
    smp.s = r.s - s0;
    smp.tau = std::exp(smp.s);
    smp.r = smp.tau / model.a;
    smp.G = transforms::q_from_depth(-r.w);
    smp.K = std::exp(0.5 * smp.G);
    smp.U = -0.5 * r.dw_ds * std::exp(-3.0 * smp.s);
  }
  compute_residuals(p);
  return p;
}

void compute_residuals(Profile& profile) {
  auto& smp = profile.samples;
  const std::size_t n = smp.size();
  std::vector<double> g(n);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = smp[i].G;
    u[i] = smp[i].U;
  }
  const std::vector<double> g_s = numerics::derivative_uniform(g, profile.ds);
  const std::vector<double> u_s = numerics::derivative_uniform(u, profile.ds);
  const double sign = branch_sign(profile.branch);
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double s = smp[i].s;
    const double one_minus_f = -std::expm1(smp[i].G);
    // Both equations divided through by K resp. e^{-4s}.
    const double k_term = one_minus_f * 0.5 * g_s[i] * std::exp(-3.0 * s);
    smp[i].res_eq1 = rel(sign * smp[i].U, -k_term);
    smp[i].res_eq2 = rel(sign * u_s[i] * std::exp(3.0 * s), one_minus_f * one_minus_f);
  }
}

std::vector<double> u_by_quadrature(const Profile& profile) {
  const auto& smp = profile.samples;
  std::vector<double> q(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const double e = std::expm1(smp[i].G);
    q[i] = e * e * std::exp(-3.0 * smp[i].s);
  }
  const std::vector<double> tail = numerics::tail_integral_uniform(q, profile.ds);
  const double beyond = std::exp(-3.0 * smp.back().s) / 3.0;
  const double sign = branch_sign(profile.branch);
  std::vector<double> out(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) out[i] = sign * (1.0 - beyond - tail[i]);
  return out;
}

Profile with_branch(Profile profile, Branch branch) {
  if (profile.branch != branch) {
    for (Sample& s : profile.samples) s.U = -s.U;
    profile.branch = branch;
  }
  return profile;
}

AsymptoticsReport fit_asymptotics(const Profile& profile, const FitOptions& options) {
  if (!(options.far_decades > 0.0) || !(options.near_decades > 0.0)) {
    throw ConfigError("fit_asymptotics: window widths must be positive");
  }
  const auto& smp = profile.samples;
  if (smp.size() < 2) throw SolverError("fit_asymptotics: empty profile");
  AsymptoticsReport rep;

  const std::vector<double> uq = u_by_quadrature(profile);
  for (std::size_t i = 0; i < smp.size(); ++i) {
    rep.quad_error = std::max(rep.quad_error, std::abs(uq[i] - smp[i].U));
  }
  const double sign = branch_sign(profile.branch);

  const double tau_max = smp.back().tau;
  const double tau_min = smp.front().tau;
  const double far_lo = tau_max * std::pow(10.0, -options.far_decades);
  const double near_hi = tau_min * std::pow(10.0, options.near_decades);

  Window kf;
  Window uf;
  Window kn;
  Window un;
  kf.tau_lo = uf.tau_lo = far_lo;
  kf.tau_hi = uf.tau_hi = tau_max;
  kn.tau_lo = un.tau_lo = tau_min;
  kn.tau_hi = un.tau_hi = near_hi;
  std::vector<double> cube;
  std::vector<double> minus_log_k;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const Sample& x = smp[i];
    const double u = sign * x.U;
    if (x.tau >= far_lo) {
      kf.x.push_back(x.s);
      kf.y.push_back(std::log(-0.5 * x.G));
      cube.push_back(x.tau * x.tau * x.tau);
      minus_log_k.push_back(-0.5 * x.G);
      // Only where 1 - U stands clear of the quadrature disagreement.
      if (1.0 - u > 10.0 * rep.quad_error) {
        uf.x.push_back(x.s);
        uf.y.push_back(std::log(1.0 - u));
      }
    }
    if (x.tau <= near_hi) {
      kn.x.push_back(x.s);
      kn.y.push_back(std::log(-std::expm1(0.5 * x.G)));
      un.x.push_back(x.s);
      un.y.push_back(std::log(u));
    }
  }
  rep.k_far = fit_window(kf, "far K", options.min_points);
  rep.u_far = fit_window(uf, "far U", options.min_points);
  rep.k_near = fit_window(kn, "near K", options.min_points);
  rep.u_near = fit_window(un, "near U", options.min_points);
  rep.exp_K_far = rep.k_far.slope;
  rep.exp_U_far = -rep.u_far.slope;
  rep.exp_K_near = rep.k_near.slope;
  rep.exp_U_near = rep.u_near.slope;

  const numerics::LineFit c = numerics::fit_line(cube, minus_log_k);
  rep.C_est = c.slope;
  rep.C_offset = c.intercept;

  const ChargeEnergy ce = charge_and_energy(profile, profile.model);
  rep.psi = ce.psi;
  rep.energy = ce.energy;
  return rep;
}

ChargeEnergy charge_and_energy(const Profile& profile, const ModelParams& model) {
  if (profile.samples.empty()) throw SolverError("charge_and_energy: empty profile");
  const Sample& end = profile.samples.back();
  if (!(std::abs(std::abs(end.U) - 1.0) <= 1e-2)) {
    throw SolverError("charge_and_energy: U has not converged at the far end (U = " +
                      std::to_string(end.U) + ")");
  }
  const double one_minus_f = -std::expm1(end.G);
  ChargeEnergy ce;
  ce.psi = end.U * one_minus_f * one_minus_f;
  ce.energy = 16.0 * std::numbers::pi * std::numbers::pi * model.h0 * std::abs(ce.psi) /
              (model.g * model.g);
  return ce;
}

}  // namespace monopole::profile
