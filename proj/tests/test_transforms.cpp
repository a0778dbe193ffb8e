#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "monopole/errors.hpp"
#include "monopole/transforms.hpp"
#include "oracles.hpp"

using namespace monopole::transforms;

TEST_CASE("v_of_g closed form") {
  CHECK(v_of_g(GValue{-1.0}).value == doctest::Approx(-1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(v_of_g(GValue{-1e-4}).value == doctest::Approx(-1.0 - 0.5e-8 + 1e-12 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(v_of_g(GValue{0.0}), std::domain_error);
  CHECK_THROWS_AS(v_of_g(GValue{0.5}), std::domain_error);
}

TEST_CASE("q_inverse against bisection oracle") {
  // V = -2 -> G = -1.8414056604...
  CHECK(q_inverse(VValue{-2.0}).value == doctest::Approx(-1.8414056604369606).epsilon(1e-13));
  CHECK(q_inverse(VValue{-2.0}).value ==
        doctest::Approx(static_cast<double>(oracle::q_bisect(-2.0L))).epsilon(1e-14));
  // Close to the equilibrium G ~ -sqrt(2 h).
  const double g = q_inverse(VValue{-1.0 - 1e-8}).value;
  CHECK(g == doctest::Approx(-1.41421e-4).epsilon(1e-4));
  // Deep tail: Q(V) ~ V + e^V.
  CHECK(q_inverse(VValue{-40.0}).value == doctest::Approx(-40.0 + std::exp(-40.0)).epsilon(1e-15));
}

TEST_CASE("q_inverse random round trips") {
  auto gen = oracle::rng(12345);
  std::uniform_real_distribution<double> log_depth(-10.0, std::log10(49.0));
  for (int i = 0; i < 2000; ++i) {
    const double v = -1.0 - std::pow(10.0, log_depth(gen));
    const double g = q_inverse(VValue{v}).value;
    REQUIRE(g < 0.0);
    CHECK(std::abs(v_of_g(GValue{g}).value - v) < 2e-13);
    const double ref = static_cast<double>(oracle::q_bisect(v));
    CHECK(std::abs(g - ref) <= 1e-9 * std::abs(ref));
  }
}

TEST_CASE("q_inverse rejects the upper domain") {
  CHECK_THROWS_AS(q_inverse(VValue{-1.0}), std::domain_error);
  CHECK_THROWS_AS(q_inverse(VValue{0.0}), std::domain_error);
  CHECK_THROWS_AS(q_inverse(VValue{-2.0}, 0.0), std::domain_error);
}

TEST_CASE("depth form keeps relative precision") {
  for (double h : {1e-300, 1e-200, 1e-40, 1e-20, 1e-12, 1e-5, 0.3, 5.0, 300.0}) {
    const double g = q_from_depth(h);
    CHECK(g < 0.0);
    CHECK(equilibrium_depth(g) == doctest::Approx(h).epsilon(1e-13));
  }
  CHECK(q_from_depth(1e-40) == doctest::Approx(-std::sqrt(2e-40)).epsilon(1e-12));
  CHECK_THROWS_AS(q_from_depth(0.0), std::domain_error);
  CHECK_THROWS_AS(q_from_depth(-1.0), std::domain_error);
  CHECK(equilibrium_depth(-1e-9) == doctest::Approx(0.5e-18).epsilon(1e-8));
}

TEST_CASE("q is strictly increasing in V") {
  double prev = q_inverse(VValue{-50.0}).value;
  for (int i = 1; i <= 500; ++i) {
    const double v = -50.0 + 48.99 * i / 500.0;
    const double g = q_inverse(VValue{v}).value;
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("rhs_r values and continuity") {
  // R(-2) = -2 (1 - e^{Q(-2)})^2
  const double e = 1.0 - std::exp(-1.8414056604369606);
  CHECK(rhs_r(-2.0) == doctest::Approx(-2.0 * e * e).epsilon(1e-13));
  CHECK(rhs_r(-2.0) == doctest::Approx(-1.4159).epsilon(1e-4));
  CHECK(rhs_r(-0.5) == doctest::Approx(2.0));
  CHECK(rhs_r(-1.0) == 0.0);
  // C^1 across -1: R(-1 - h) ~ -4 h.
  CHECK(rhs_r(-1.0 - 1e-9) == doctest::Approx(-4e-9).epsilon(1e-4));
  CHECK(rhs_r_offset(-1e-30) == doctest::Approx(-4e-30).epsilon(1e-12));
  CHECK(rhs_r_offset(0.25) == doctest::Approx(1.0));
  // R -> -2 as V -> -inf
  CHECK(rhs_r(-60.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("rhs_r_derivative matches finite differences") {
  CHECK(rhs_r_derivative(-2.0) == doctest::Approx(4.0 * std::exp(-1.8414056604369606)));
  CHECK(rhs_r_derivative(-2.0) == doctest::Approx(0.6343).epsilon(1e-4));
  CHECK(rhs_r_derivative(0.0) == 4.0);
  CHECK(rhs_r_derivative_offset(-1e-20) == doctest::Approx(4.0).epsilon(1e-9));
  auto gen = oracle::rng(7);
  std::uniform_real_distribution<double> dist(-12.0, -1.05);
  for (int i = 0; i < 300; ++i) {
    const double v = dist(gen);
    const long double h = 1e-4L;
    const long double fd =
        (oracle::r_of_v(v + h) - oracle::r_of_v(v - h)) / (2.0L * h);
    const double an = rhs_r_derivative(v);
    CHECK(an > 0.0);
    CHECK(std::abs(an - static_cast<double>(fd)) <= 1e-6 * an);
  }
}
