// monopole: solve, sweep and verify the 6D monopole profile.
//
// Exit status: 0 ok, 1 solver error, 2 config error, 3 gates failed.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "monopole/errors.hpp"
#include "monopole/profile.hpp"
#include "monopole/report.hpp"
#include "monopole/shooting.hpp"
#include "monopole/verification.hpp"

namespace {

using namespace monopole;

enum Exit { kOk = 0, kSolverError = 1, kConfigError = 2, kGatesFailed = 3 };

struct RunConfig {
  double m = -2.0;
  std::vector<double> m_list;
  double g = 1.0;
  double h0 = 1.0;
  int grid = 2000;
  double ode_rel_tol = 1e-10;
  double ode_abs_tol = 1e-12;
  double shoot_tol = 1e-12;
  double t_max = 12.0;
  double s_max = 20.0;
  std::string format = "csv";
  std::string out;
  std::string branch = "plus";
};

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--g", cfg.g, "Gauge coupling g > 0")->capture_default_str();
  sub->add_option("--h0", cfg.h0, "Higgs vacuum value H0 > 0")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "Uniform s-grid size (>= 16)")->capture_default_str();
  sub->add_option("--ode-rel-tol,--ode-tol", cfg.ode_rel_tol, "Integrator relative tolerance")
      ->capture_default_str();
  sub->add_option("--ode-abs-tol", cfg.ode_abs_tol, "Integrator absolute tolerance")
      ->capture_default_str();
  sub->add_option("--shoot-tol", cfg.shoot_tol, "Bisection width on the slope n")
      ->capture_default_str();
  sub->add_option("--t-max", cfg.t_max, "Reversed-variable horizon")->capture_default_str();
  sub->add_option("--s-max", cfg.s_max, "Forward horizon")->capture_default_str();
  sub->add_option("--out", cfg.out, "Output path (default stdout)");
}

shooting::ShootingParams shooting_params(const RunConfig& cfg, double m) {
  if (!(m < -1.0)) throw ConfigError("m must be < -1 (got " + report::format_double(m) + ")");
  shooting::ShootingParams p;
  p.m = m;
  p.t_max = cfg.t_max;
  p.s_max = cfg.s_max;
  p.bisect_tol = cfg.shoot_tol;
  p.ode.rel_tol = cfg.ode_rel_tol;
  p.ode.abs_tol = cfg.ode_abs_tol;
  p.validate();
  return p;
}

void check_grid(const RunConfig& cfg) {
  if (cfg.grid < 16) throw ConfigError("grid must be >= 16");
}

// Writes to --out, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path);
  f << text;
}

int run_solve(const RunConfig& cfg) {
  check_grid(cfg);
  const profile::ModelParams model = profile::ModelParams::make(cfg.g, cfg.h0);
  const shooting::ShootingParams sp = shooting_params(cfg, cfg.m);
  const shooting::ShootingResult res = shooting::solve(sp);
  profile::ReconstructOptions opt;
  opt.grid = cfg.grid;
  profile::Profile p = profile::reconstruct(res, model, opt);
  const profile::AsymptoticsReport rep = profile::fit_asymptotics(p);
  const std::vector<report::Gate> gates = report::evaluate_gates(p, rep);
  if (cfg.branch == "minus") p = profile::with_branch(std::move(p), profile::Branch::Minus);

  if (cfg.format == "json") {
    emit(cfg.out, report::profile_json(res, p, rep, gates));
  } else {
    std::ostringstream table;
    report::write_profile_csv(table, p);
    emit(cfg.out, table.str());
    const std::string summary = report::summary_json(res, p, rep, gates);
    if (cfg.out.empty()) {
      std::cerr << summary;
    } else {
      emit(cfg.out + ".summary.json", summary);
    }
  }
  return report::all_passed(gates) ? kOk : kGatesFailed;
}

int run_sweep(const RunConfig& cfg) {
  std::vector<double> ms = cfg.m_list;
  if (ms.empty()) ms.push_back(cfg.m);
  std::vector<shooting::ShootingParams> params;
  for (double m : ms) params.push_back(shooting_params(cfg, m));

  std::vector<std::future<shooting::ShootingResult>> jobs;
  for (const auto& p : params) {
    jobs.push_back(std::async(std::launch::async, [p] { return shooting::solve(p); }));
  }
  std::vector<shooting::ShootingResult> rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      rows.push_back(jobs[i].get());
    } catch (const SolverError& e) {
      throw SolverError("sweep failed at m = " + report::format_double(ms[i]) + ": " + e.what());
    }
  }

  // n* must grow strictly as m decreases; duplicates must agree.
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (ms[i] < ms[j] && !(rows[i].n_star > rows[j].n_star)) monotone = false;
      if (ms[i] == ms[j] && std::abs(rows[i].n_star - rows[j].n_star) > 1e-10) monotone = false;
    }
  }

  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"m", r.m}, {"n_star", r.n_star}, {"sigma_inf", r.sigma_inf}, {"s0", r.s0}});
    }
    nlohmann::ordered_json doc = {{"rows", arr}, {"monotone", monotone}};
    os << doc.dump(2) << '\n';
  } else {
    os << "m,n_star,sigma_inf,s0\n";
    for (const auto& r : rows) {
      os << report::format_double(r.m) << ',' << report::format_double(r.n_star) << ','
         << report::format_double(r.sigma_inf) << ',' << report::format_double(r.s0) << '\n';
    }
  }
  emit(cfg.out, os.str());
  if (!monotone) {
    std::cerr << report::error_json("gate", "n_star is not strictly monotone in m") << '\n';
    return kGatesFailed;
  }
  return kOk;
}

int run_verify(const RunConfig& cfg) {
  check_grid(cfg);
  verification::BatteryConfig bc;
  bc.shooting = shooting_params(cfg, -2.0);
  bc.model = profile::ModelParams::make(cfg.g, cfg.h0);
  bc.grid = cfg.grid;
  const auto results = verification::run_battery(bc);
  std::ostringstream os;
  bool ok = true;
  for (const auto& r : results) {
    os << verification::format_line(r) << '\n';
    ok = ok && r.passed;
  }
  os << (ok ? "ALL PASS" : "SOME FAILED") << '\n';
  emit(cfg.out, os.str());
  return ok ? kOk : kGatesFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shooting solver for the 6D SO(5) monopole profile"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* solve = app.add_subcommand("solve", "Solve one profile and write it with a summary");
  add_common(solve, cfg);
  solve->add_option("--m", cfg.m, "V(0) = m < -1")->capture_default_str();
  solve->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve->add_option("--branch", cfg.branch, "plus, or minus for U -> -U")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Shooting slope n*(m) over a list of m");
  add_common(sweep, cfg);
  sweep->add_option("--m", cfg.m, "Single m when --m-list is absent")->capture_default_str();
  sweep->add_option("--m-list", cfg.m_list, "Comma-separated m values")->delimiter(',');
  sweep->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant battery");
  add_common(verify, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << report::error_json("config", e.what()) << '\n';
    return kConfigError;
  }

  try {
    if (solve->parsed()) return run_solve(cfg);
    if (sweep->parsed()) return run_sweep(cfg);
    return run_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << report::error_json("config", e.what()) << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << report::error_json("solver", e.what()) << '\n';
    return kSolverError;
  }
}
