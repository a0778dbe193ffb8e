#include "monopole/verification.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>

#include "monopole/integrator.hpp"
#include "monopole/transforms.hpp"

namespace monopole::verification {

namespace {

std::string printf_string(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

class Solves {
 public:
  explicit Solves(const BatteryConfig& cfg) : cfg_(cfg) {}

  const shooting::ShootingResult& get(double m) {
    auto it = cache_.find(m);
    if (it == cache_.end()) {
      shooting::ShootingParams p = cfg_.shooting;
      p.m = m;
      it = cache_.emplace(m, shooting::solve(p)).first;
    }
    return it->second;
  }

  const profile::Profile& profile(double m) {
    auto it = profiles_.find(m);
    if (it == profiles_.end()) {
      profile::ReconstructOptions opt;
      opt.grid = cfg_.grid;
      it = profiles_.emplace(m, profile::reconstruct(get(m), cfg_.model, opt)).first;
    }
    return it->second;
  }

 private:
  const BatteryConfig& cfg_;
  std::map<double, shooting::ShootingResult> cache_;
  std::map<double, profile::Profile> profiles_;
};

constexpr double kDefaultM = -2.0;

CriterionResult boundary(Solves& s) {
  const profile::Profile& p = s.profile(kDefaultM);
  const profile::Sample& a = p.samples.front();
  const profile::Sample& b = p.samples.back();
  const bool ok = std::abs(a.K - 1.0) < 1e-3 && a.U < 1e-2 && b.K < 1e-6 &&
                  std::abs(b.U - 1.0) < 1e-3;
  return {1, "boundary values", ok,
          printf_string("near |K-1|=%.3g U=%.3g; far K=%.3g |U-1|=%.3g", std::abs(a.K - 1.0),
                        a.U, b.K, std::abs(b.U - 1.0))};
}

CriterionResult residuals(Solves& s) {
  const profile::Profile& p = s.profile(kDefaultM);
  double r1 = 0.0;
  double r2 = 0.0;
  for (std::size_t i = 1; i + 1 < p.samples.size(); ++i) {
    r1 = std::max(r1, p.samples[i].res_eq1);
    r2 = std::max(r2, p.samples[i].res_eq2);
  }
  const std::vector<double> uq = profile::u_by_quadrature(p);
  double dq = 0.0;
  for (std::size_t i = 0; i < uq.size(); ++i) dq = std::max(dq, std::abs(uq[i] - p.samples[i].U));
  const bool ok = r1 < 1e-6 && r2 < 1e-6 && dq < 1e-5;
  return {2, "Bogomolny residuals", ok,
          printf_string("res1=%.3g res2=%.3g |U-U_quad|=%.3g", r1, r2, dq)};
}

CriterionResult monotonicity(Solves& s) {
  const profile::Profile& p = s.profile(kDefaultM);
  std::size_t bad_k = 0;
  std::size_t bad_u = 0;
  for (std::size_t i = 1; i < p.samples.size(); ++i) {
    if (!(p.samples[i].K < p.samples[i - 1].K)) ++bad_k;
    if (!(p.samples[i].U > p.samples[i - 1].U)) ++bad_u;
  }
  return {3, "monotone K and U", bad_k == 0 && bad_u == 0,
          printf_string("K violations=%zu U violations=%zu over %zu samples", bad_k, bad_u,
                        p.samples.size())};
}

CriterionResult far_asymptotics(Solves& s) {
  const profile::AsymptoticsReport r = profile::fit_asymptotics(s.profile(kDefaultM));
  const bool ok = std::abs(r.exp_K_far - 3.0) <= 0.1 && std::abs(r.u_far.slope + 3.0) <= 0.05;
  return {4, "far asymptotics", ok,
          printf_string("slope log(-log K)=%.5f slope log(1-U)=%.5f C=%.5f", r.exp_K_far,
                        r.u_far.slope, r.C_est)};
}

CriterionResult near_asymptotics(Solves& s) {
  const profile::AsymptoticsReport r = profile::fit_asymptotics(s.profile(kDefaultM));
  const bool ok = std::abs(r.exp_K_near - 2.0) <= 0.05 && std::abs(r.exp_U_near - 1.0) <= 0.05;
  return {5, "near asymptotics", ok,
          printf_string("slope log(1-K)=%.6f slope log U=%.6f", r.exp_K_near, r.exp_U_near)};
}

CriterionResult translation(Solves& s) {
  const shooting::TranslationCheck tc = shooting::translation_discrepancy(s.get(-1.5), s.get(-3.0));
  const profile::Profile& pa = s.profile(-1.5);
  const profile::Profile& pb = s.profile(-3.0);
  // Compare the normalized profiles on their common physical range.
  profile::ReconstructOptions opt;
  opt.grid = static_cast<int>(pa.samples.size());
  opt.s_lo = std::max(pa.samples.front().s, pb.samples.front().s);
  opt.s_hi = std::min(pa.samples.back().s, pb.samples.back().s);
  const profile::Profile ca = profile::reconstruct(s.get(-1.5), pa.model, opt);
  const profile::Profile cb = profile::reconstruct(s.get(-3.0), pb.model, opt);
  double dk = 0.0;
  double du = 0.0;
  for (std::size_t i = 0; i < ca.samples.size(); ++i) {
    dk = std::max(dk, std::abs(ca.samples[i].K - cb.samples[i].K));
    du = std::max(du, std::abs(ca.samples[i].U - cb.samples[i].U));
  }
  const bool ok = tc.sup_diff < 1e-4 && dk < 1e-4 && du < 1e-4;
  return {6, "uniqueness up to translation", ok,
          printf_string("shift=%.12f sup|dV|=%.3g sup|dK|=%.3g sup|dU|=%.3g", tc.shift,
                        tc.sup_diff, dk, du)};
}

CriterionResult slope_monotonicity(Solves& s, const BatteryConfig& cfg) {
  const double n4 = s.get(-4.0).n_star;
  const double n2 = s.get(-2.0).n_star;
  const double n12 = s.get(-1.2).n_star;
  double spread = 0.0;
  for (double m : {-4.0, -2.0, -1.2}) {
    shooting::ShootingParams p = cfg.shooting;
    p.m = m;
    spread = std::max(spread, std::abs(shooting::solve(p).n_star - s.get(m).n_star));
  }
  const bool ok = n4 > n2 && n2 > n12 && n12 > 0.0 && spread <= 1e-10;
  return {7, "shooting slope monotone in m", ok,
          printf_string("n*(-4)=%.12f n*(-2)=%.12f n*(-1.2)=%.12f repeat spread=%.3g", n4, n2,
                        n12, spread)};
}

CriterionResult classification(Solves& s, const BatteryConfig& cfg) {
  const double n_star = s.get(kDefaultM).n_star;
  int wrong = 0;
  for (int k = 0; k < 10; ++k) {
    const double delta = std::pow(10.0, -7.5 + 7.5 * k / 9.0);
    using shooting::Verdict;
    if (shooting::classify(kDefaultM, n_star - delta, cfg.shooting).verdict != Verdict::Minus) {
      ++wrong;
    }
    if (shooting::classify(kDefaultM, n_star + delta, cfg.shooting).verdict != Verdict::Plus) {
      ++wrong;
    }
  }
  return {8, "classification structure", wrong == 0,
          printf_string("misclassified=%d of 20 probes, delta in [3.2e-8, 1]", wrong)};
}

CriterionResult charge(Solves& s) {
  const profile::Profile& p = s.profile(kDefaultM);
  const profile::ChargeEnergy ce = profile::charge_and_energy(p, p.model);
  const double e_ref = 16.0 * std::numbers::pi * std::numbers::pi * p.model.h0 /
                       (p.model.g * p.model.g);
  const double e_rel = std::abs(ce.energy - e_ref) / e_ref;
  const bool ok = std::abs(ce.psi - 1.0) <= 1e-3 && e_rel <= 1e-3;
  return {9, "charge and energy", ok,
          printf_string("psi=%.8f E=%.6f (16 pi^2 H0/g^2=%.6f)", ce.psi, ce.energy, e_ref)};
}

CriterionResult self_tests() {
  using namespace transforms;
  double rt = 0.0;
  auto probe = [&](double v) {
    const double back = v_of_g(q_inverse(VValue{v})).value;
    rt = std::max(rt, std::abs(back - v));
  };
  for (int i = 0; i <= 400; ++i) {
    probe(-1.0 - std::pow(10.0, -10.0 + i * (std::log10(49.0) + 10.0) / 400.0));
  }
  for (int i = 0; i <= 200; ++i) probe(-50.0 + 48.5 * i / 200.0);

  double dr = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double v = -8.0 + 6.99 * i / 200.0;
    const double h = std::min(1e-3, 0.01 * (-1.0 - v));
    const double fd = (-rhs_r(v + 2 * h) + 8 * rhs_r(v + h) - 8 * rhs_r(v - h) + rhs_r(v - 2 * h)) /
                      (12 * h);
    const double an = rhs_r_derivative(v);
    dr = std::max(dr, std::abs(fd - an) / std::abs(an));
  }

  const ode::Rhs harmonic = [](const ode::OdeState& st) {
    return ode::Derivative{st.yp, -st.y};
  };
  const ode::Rhs growth = [](const ode::OdeState& st) {
    return ode::Derivative{st.yp, st.y};
  };
  const ode::Rhs v_eq = [](const ode::OdeState& st) {
    return ode::Derivative{st.yp, rhs_r_offset(st.y) - 3.0 * st.yp};
  };
  const double o1 = ode::convergence_order(harmonic, {0.0, 0.0, 1.0}, 10.0).order;
  const double o2 = ode::convergence_order(growth, {0.0, 1.0, 1.0}, 1.0).order;
  const double o3 = ode::convergence_order(v_eq, {0.0, -1.0, 1.0}, 2.0).order;
  auto in_range = [](double o) { return o >= 4.0 && o <= 6.0; };
  const bool ok = rt < 2e-13 && dr < 1e-6 && in_range(o1) && in_range(o2) && in_range(o3);
  return {10, "numerics self-tests", ok,
          printf_string("q round-trip=%.3g R' vs FD=%.3g order harmonic=%.3f exp=%.3f V=%.3f",
                        rt, dr, o1, o2, o3)};
}

}  // namespace

std::vector<CriterionResult> run_battery(const BatteryConfig& cfg) {
  Solves solves(cfg);
  const std::vector<std::pair<std::pair<int, const char*>, std::function<CriterionResult()>>>
      battery = {
          {{1, "boundary values"}, [&] { return boundary(solves); }},
          {{2, "Bogomolny residuals"}, [&] { return residuals(solves); }},
          {{3, "monotone K and U"}, [&] { return monotonicity(solves); }},
          {{4, "far asymptotics"}, [&] { return far_asymptotics(solves); }},
          {{5, "near asymptotics"}, [&] { return near_asymptotics(solves); }},
          {{6, "uniqueness up to translation"}, [&] { return translation(solves); }},
          {{7, "shooting slope monotone in m"}, [&] { return slope_monotonicity(solves, cfg); }},
          {{8, "classification structure"}, [&] { return classification(solves, cfg); }},
          {{9, "charge and energy"}, [&] { return charge(solves); }},
          {{10, "numerics self-tests"}, [] { return self_tests(); }},
      };
  std::vector<CriterionResult> out;
  for (const auto& [meta, run] : battery) {
    try {
      out.push_back(run());
    } catch (const std::exception& e) {
      out.push_back({meta.first, meta.second, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return printf_string("%s [%d] %s: %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                       r.measured.c_str());
}

}  // namespace monopole::verification
