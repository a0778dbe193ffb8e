#include "monopole/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace monopole::report {

namespace {

using nlohmann::ordered_json;

const char* branch_name(profile::Branch b) {
  return b == profile::Branch::Plus ? "plus" : "minus";
}

ordered_json fit_json(const profile::PowerFit& f) {
  return {{"slope", f.slope},   {"intercept", f.intercept}, {"rms", f.rms},
          {"tau_lo", f.tau_lo}, {"tau_hi", f.tau_hi},       {"count", f.count}};
}

ordered_json summary_object(const shooting::ShootingResult& res, const profile::Profile& p,
                            const profile::AsymptoticsReport& rep,
                            const std::vector<Gate>& gates) {
  const shooting::ShootingParams& sp = res.params;
  ordered_json out;
  out["params"] = {{"m", res.m},
                   {"g", p.model.g},
                   {"h0", p.model.h0},
                   {"a", p.model.a},
                   {"grid", p.samples.size()},
                   {"ode_rel_tol", sp.ode.rel_tol},
                   {"ode_abs_tol", sp.ode.abs_tol},
                   {"shoot_tol", sp.bisect_tol},
                   {"t_max", sp.t_max},
                   {"s_max", sp.s_max},
                   {"branch", branch_name(p.branch)}};
  out["shooting"] = {{"n_star", res.n_star},
                     {"sigma_inf", res.sigma_inf},
                     {"s0", res.s0},
                     {"bracket_width", res.bracket_width},
                     {"bisections", res.bisections},
                     {"converged_inconclusive", res.converged_inconclusive},
                     {"t_match", res.tail.t_match},
                     {"tail_slope_mismatch", res.tail.slope_mismatch},
                     {"s_end", res.s_end},
                     {"sigma_tail", res.sigma_tail}};
  out["asymptotics"] = {{"exp_K_far", rep.exp_K_far},   {"exp_U_far", rep.exp_U_far},
                        {"exp_K_near", rep.exp_K_near}, {"exp_U_near", rep.exp_U_near},
                        {"C_est", rep.C_est},           {"C_offset", rep.C_offset},
                        {"fits",
                         {{"K_far", fit_json(rep.k_far)},
                          {"U_far", fit_json(rep.u_far)},
                          {"K_near", fit_json(rep.k_near)},
                          {"U_near", fit_json(rep.u_near)}}}};
  out["charge_energy"] = {{"psi", rep.psi}, {"energy", rep.energy}};
  const ResidualMax rm = residual_max(p, rep);
  out["residual_max"] = {{"eq1", rm.eq1}, {"eq2", rm.eq2}, {"u_quadrature", rm.quadrature}};
  ordered_json g = ordered_json::array();
  for (const Gate& gate : gates) {
    g.push_back({{"name", gate.name},
                 {"passed", gate.passed},
                 {"value", gate.value},
                 {"limit", gate.limit}});
  }
  out["gates"] = g;
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_profile_csv(std::ostream& os, const profile::Profile& p) {
  os << kCsvHeader << '\n';
  for (const profile::Sample& s : p.samples) {
    os << format_double(s.s) << ',' << format_double(s.tau) << ',' << format_double(s.r)
       << ',' << format_double(s.K) << ',' << format_double(s.U) << ','
       << format_double(s.res_eq1) << ',' << format_double(s.res_eq2) << '\n';
  }
}

ResidualMax residual_max(const profile::Profile& p, const profile::AsymptoticsReport& rep) {
  ResidualMax rm;
  rm.quadrature = rep.quad_error;
  for (std::size_t i = 1; i + 1 < p.samples.size(); ++i) {
    rm.eq1 = std::max(rm.eq1, p.samples[i].res_eq1);
    rm.eq2 = std::max(rm.eq2, p.samples[i].res_eq2);
  }
  return rm;
}

std::vector<Gate> evaluate_gates(const profile::Profile& p,
                                 const profile::AsymptoticsReport& rep) {
  const auto& smp = p.samples;
  const double sign = p.branch == profile::Branch::Plus ? 1.0 : -1.0;
  std::size_t bad_k = 0;
  std::size_t bad_u = 0;
  std::size_t out_of_range = 0;
  for (std::size_t i = 1; i < smp.size(); ++i) {
    if (!(smp[i].K < smp[i - 1].K)) ++bad_k;
    if (!(sign * smp[i].U > sign * smp[i - 1].U)) ++bad_u;
  }
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const double u = sign * smp[i].U;
    if (!(smp[i].K > 0.0 && smp[i].K < 1.0 && u > 0.0 && u < 1.0)) ++out_of_range;
  }
  const ResidualMax rm = residual_max(p, rep);
  std::vector<Gate> g;
  g.push_back({"K_strictly_decreasing", bad_k == 0, static_cast<double>(bad_k), "0 violations"});
  g.push_back({"U_strictly_increasing", bad_u == 0, static_cast<double>(bad_u), "0 violations"});
  g.push_back({"interior_range", out_of_range == 0, static_cast<double>(out_of_range),
               "0 < K < 1 and 0 < U < 1"});
  g.push_back({"residual_eq1", rm.eq1 < 1e-6, rm.eq1, "< 1e-6"});
  g.push_back({"residual_eq2", rm.eq2 < 1e-6, rm.eq2, "< 1e-6"});
  g.push_back({"u_quadrature", rm.quadrature < 1e-5, rm.quadrature, "< 1e-5"});
  g.push_back({"exp_K_far", std::abs(rep.exp_K_far - 3.0) <= 0.1, rep.exp_K_far, "3 +- 0.1"});
  g.push_back({"slope_U_far", std::abs(rep.u_far.slope + 3.0) <= 0.05, rep.u_far.slope,
               "-3 +- 0.05"});
  g.push_back({"exp_K_near", std::abs(rep.exp_K_near - 2.0) <= 0.05, rep.exp_K_near,
               "2 +- 0.05"});
  g.push_back({"exp_U_near", std::abs(rep.exp_U_near - 1.0) <= 0.05, rep.exp_U_near,
               "1 +- 0.05"});
  g.push_back({"psi", std::abs(std::abs(rep.psi) - 1.0) <= 1e-3, rep.psi, "|psi| = 1 +- 1e-3"});
  return g;
}

bool all_passed(const std::vector<Gate>& gates) {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

std::string summary_json(const shooting::ShootingResult& res, const profile::Profile& p,
                         const profile::AsymptoticsReport& rep,
                         const std::vector<Gate>& gates, int indent) {
  return summary_object(res, p, rep, gates).dump(indent) + "\n";
}

std::string profile_json(const shooting::ShootingResult& res, const profile::Profile& p,
                         const profile::AsymptoticsReport& rep,
                         const std::vector<Gate>& gates, int indent) {
  ordered_json out = summary_object(res, p, rep, gates);
  ordered_json table = ordered_json::array();
  for (const profile::Sample& s : p.samples) {
    table.push_back({s.s, s.tau, s.r, s.K, s.U, s.res_eq1, s.res_eq2});
  }
  out["profile"] = {{"columns", {"s", "tau", "r", "K", "U", "res_eq1", "res_eq2"}},
                    {"rows", table}};
  return out.dump(indent) + "\n";
}

std::string error_json(const std::string& kind, const std::string& message) {
  const ordered_json e = {{"error", {{"kind", kind}, {"message", message}}}};
  return e.dump();
}

}  // namespace monopole::report
