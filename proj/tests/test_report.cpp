#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "monopole/profile.hpp"
#include "monopole/report.hpp"

using namespace monopole;

namespace {

struct Fixture {
  shooting::ShootingResult res;
  profile::Profile prof;
  profile::AsymptoticsReport rep;
  std::vector<report::Gate> gates;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    shooting::ShootingParams p;
    x.res = shooting::solve(p);
    profile::ReconstructOptions opt;
    opt.grid = 400;
    x.prof = profile::reconstruct(x.res, profile::ModelParams::make(1.0, 1.0), opt);
    x.rep = profile::fit_asymptotics(x.prof);
    x.gates = report::evaluate_gates(x.prof, x.rep);
    return x;
  }();
  return f;
}

}  // namespace

TEST_CASE("format_double uses 17 significant digits") {
  CHECK(report::format_double(0.1) == "0.10000000000000001");
  CHECK(report::format_double(-2.0) == "-2");
  CHECK(report::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(report::format_double(1e-7) == "9.9999999999999995e-08");
  CHECK(std::stod(report::format_double(3.564008604967512)) == 3.564008604967512);
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  report::write_profile_csv(os, fixture().prof);
  const std::string text = os.str();
  CHECK(text.rfind("s,tau,r,K,U,res_eq1,res_eq2\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == fixture().prof.samples.size() + 1);
  std::istringstream in(text);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  std::size_t commas = 0;
  for (char c : row) commas += c == ',';
  CHECK(commas == 6);
  std::ostringstream again;
  report::write_profile_csv(again, fixture().prof);
  CHECK(again.str() == text);
}

TEST_CASE("summary schema") {
  const Fixture& f = fixture();
  const std::string s = report::summary_json(f.res, f.prof, f.rep, f.gates);
  const auto doc = nlohmann::json::parse(s);
  for (const char* key :
       {"params", "shooting", "asymptotics", "charge_energy", "residual_max", "gates"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc.size() == 6);
  CHECK(doc["shooting"]["n_star"].get<double>() == f.res.n_star);
  CHECK(doc["charge_energy"]["psi"].get<double>() == f.rep.psi);
  CHECK(doc["gates"].is_array());
  CHECK(report::summary_json(f.res, f.prof, f.rep, f.gates) == s);
  const auto full = nlohmann::json::parse(report::profile_json(f.res, f.prof, f.rep, f.gates));
  CHECK(full["profile"]["rows"].size() == f.prof.samples.size());
  CHECK(full["profile"]["columns"][3] == "K");
}

TEST_CASE("gates pass on a default solve") {
  for (const report::Gate& g : fixture().gates) {
    INFO(g.name);
    CHECK(g.passed);
  }
  CHECK(report::all_passed(fixture().gates));
}

TEST_CASE("gates catch a broken profile") {
  profile::Profile broken = fixture().prof;
  std::swap(broken.samples[10].K, broken.samples[11].K);
  const auto gates = report::evaluate_gates(broken, fixture().rep);
  CHECK_FALSE(report::all_passed(gates));
  CHECK_FALSE(gates[0].passed);
}

TEST_CASE("error record") {
  const auto e = nlohmann::json::parse(report::error_json("config", "bad \"m\""));
  CHECK(e["error"]["kind"] == "config");
  CHECK(e["error"]["message"] == "bad \"m\"");
}
