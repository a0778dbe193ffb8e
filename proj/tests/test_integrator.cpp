#include <cmath>
#include <vector>

#include "doctest.h"
#include "monopole/errors.hpp"
#include "monopole/integrator.hpp"
#include "monopole/shooting.hpp"
#include "oracles.hpp"

using namespace monopole;
using namespace monopole::ode;

namespace {

Derivative harmonic(const OdeState& s) { return {s.yp, -s.y}; }
Derivative growth(const OdeState& s) { return {s.yp, s.y}; }

}  // namespace

TEST_CASE("harmonic oscillator against the closed form") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const Solution sol = integrate(harmonic, {0.0, 0.0, 1.0}, 20.0, cfg);
  const OdeState& end = sol.final_state();
  CHECK(end.x == 20.0);
  CHECK(end.y == doctest::Approx(std::sin(20.0)).epsilon(1e-9).scale(1.0));
  CHECK(end.yp == doctest::Approx(std::cos(20.0)).epsilon(1e-9).scale(1.0));
  for (const OdeState& n : sol.nodes) {
    CHECK(std::abs(n.y - std::sin(n.x)) < 1e-9);
  }
  CHECK(sol.accepted_steps > 0);
}

TEST_CASE("backward integration of exponential growth") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-300;
  const Solution sol = integrate(growth, {2.0, std::exp(2.0), std::exp(2.0)}, -3.0, cfg);
  CHECK(sol.final_state().x == -3.0);
  CHECK(sol.final_state().y == doctest::Approx(std::exp(-3.0)).epsilon(1e-10));
  for (std::size_t i = 1; i < sol.nodes.size(); ++i) CHECK(sol.nodes[i].x < sol.nodes[i - 1].x);
}

TEST_CASE("landing points are step endpoints") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-11;
  std::vector<double> land;
  for (int i = 0; i <= 50; ++i) land.push_back(0.2 * i);
  const Solution sol = integrate(harmonic, {0.0, 0.0, 1.0}, 10.0, cfg, {}, land);
  REQUIRE(sol.samples.size() == land.size());
  for (std::size_t i = 0; i < land.size(); ++i) {
    CHECK(sol.samples[i].x == land[i]);
    CHECK(sol.samples[i].y == doctest::Approx(std::sin(land[i])).epsilon(1e-9).scale(1.0));
  }
  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(integrate(harmonic, {0.0, 0.0, 1.0}, 2.0, cfg, {}, unsorted), ConfigError);
}

TEST_CASE("events are located on the interpolant") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-11;
  EventSpec ev;
  ev.events.push_back({"zero", [](const OdeState& s) { return s.y; }, Crossing::Falling, true});
  const Solution sol = integrate(harmonic, {0.0, 0.0, 1.0}, 10.0, cfg, ev);
  REQUIRE(sol.stopped_by_event);
  REQUIRE(sol.events.size() == 1);
  // sin falls through zero at pi, not at 0 (rising side excluded).
  CHECK(sol.events[0].state.x == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(sol.final_state().x == sol.events[0].state.x);

  EventSpec both;
  both.events.push_back({"peak", [](const OdeState& s) { return s.yp; }, Crossing::Any, false});
  both.events.push_back({"deep", [](const OdeState& s) { return s.y + 0.5; }, Crossing::Falling,
                         true});
  const Solution s2 = integrate(harmonic, {0.0, 0.0, 1.0}, 10.0, cfg, both);
  REQUIRE(s2.events.size() == 2);
  CHECK(s2.events[0].index == 0);
  CHECK(s2.events[0].state.x == doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(s2.events[1].index == 1);
  CHECK(s2.events[1].state.x == doctest::Approx(7 * M_PI / 6).epsilon(1e-10));
}

TEST_CASE("configuration and runtime failures") {
  IntegratorConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate(harmonic, {0.0, 0.0, 1.0}, 1.0, bad), ConfigError);
  IntegratorConfig cfg;
  CHECK_THROWS_AS(integrate(harmonic, {1.0, 0.0, 1.0}, 1.0, cfg), ConfigError);
  CHECK_THROWS_AS(integrate(harmonic, {0.0, NAN, 1.0}, 1.0, cfg), IntegrationError);

  // y' = y^2 blows up at x = 1.
  auto blowup = [](const OdeState& s) { return Derivative{s.y * s.y, 0.0}; };
  try {
    integrate(blowup, {0.0, 1.0, 0.0}, 2.0, cfg);
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK((e.reason() == IntegrationError::Reason::StepUnderflow ||
           e.reason() == IntegrationError::Reason::NonFinite));
  }

  IntegratorConfig few;
  few.max_steps = 5;
  try {
    integrate(harmonic, {0.0, 0.0, 1.0}, 100.0, few);
    FAIL("expected step limit");
  } catch (const IntegrationError& e) {
    CHECK(e.reason() == IntegrationError::Reason::StepLimit);
  }
}

TEST_CASE("tolerance controls the global error") {
  auto err = [](double tol) {
    IntegratorConfig cfg;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol;
    return std::abs(integrate(harmonic, {0.0, 0.0, 1.0}, 10.0, cfg).final_state().y -
                    std::sin(10.0));
  };
  CHECK(err(1e-10) < err(1e-6));
  CHECK(err(1e-10) < 1e-8);
}

TEST_CASE("observed order on the three reference problems") {
  const OrderEstimate h = convergence_order(harmonic, {0.0, 0.0, 1.0}, 10.0);
  CHECK(h.order >= 4.0);
  CHECK(h.order <= 6.0);
  const OdeState exact{1.0, std::exp(1.0), std::exp(1.0)};
  const OrderEstimate e = convergence_order(growth, {0.0, 1.0, 1.0}, 1.0, 1e-7, &exact);
  CHECK(e.order >= 4.0);
  CHECK(e.order <= 6.0);
  const OrderEstimate v = convergence_order(shooting::reversed_rhs, {0.0, -1.0, 1.0}, 2.0);
  CHECK(v.order >= 4.0);
  CHECK(v.order <= 6.0);
  CHECK(v.error_fine < v.error_coarse);
}

TEST_CASE("fixed-step integration agrees with the oracle RK4 on the V equation") {
  // V(0) = -2, V_t(0) = 1 on [0, 2]; compare with an independent RK4 in long double.
  const OdeState end = integrate_fixed(shooting::reversed_rhs, {0.0, -1.0, 1.0}, 2.0, 4000);
  long double v = -2.0L;
  long double vt = 1.0L;
  const long double h = 2.0L / 4000;
  auto acc = [](long double vv, long double vvt) { return oracle::r_of_v(vv) - 3.0L * vvt; };
  for (int i = 0; i < 4000; ++i) {
    const long double k1v = vt, k1t = acc(v, vt);
    const long double k2v = vt + 0.5L * h * k1t, k2t = acc(v + 0.5L * h * k1v, vt + 0.5L * h * k1t);
    const long double k3v = vt + 0.5L * h * k2t, k3t = acc(v + 0.5L * h * k2v, vt + 0.5L * h * k2t);
    const long double k4v = vt + h * k3t, k4t = acc(v + h * k3v, vt + h * k3t);
    v += h / 6.0L * (k1v + 2 * k2v + 2 * k3v + k4v);
    vt += h / 6.0L * (k1t + 2 * k2t + 2 * k3t + k4t);
  }
  CHECK(end.y - 1.0 == doctest::Approx(static_cast<double>(v)).epsilon(1e-10));
  CHECK(end.yp == doctest::Approx(static_cast<double>(vt)).epsilon(1e-9));
}

TEST_CASE("hermite interpolates cubics exactly") {
  auto f = [](double x) { return OdeState{x, x * x * x - x, 3 * x * x - 1}; };
  auto df = [](double x) { return Derivative{3 * x * x - 1, 6 * x}; };
  const OdeState a = f(0.5);
  const OdeState b = f(1.5);
  const OdeState m = hermite(a, df(0.5), b, df(1.5), 1.1);
  CHECK(m.y == doctest::Approx(f(1.1).y).epsilon(1e-14));
}
