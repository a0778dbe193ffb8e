#include <cmath>
#include <vector>

#include "doctest.h"
#include "monopole/numerics.hpp"
#include "oracles.hpp"

using namespace monopole::numerics;

TEST_CASE("fd_weights reproduce textbook stencils") {
  const double three[] = {-1.0, 0.0, 1.0};
  const auto d1 = fd_weights(0.0, three, 1);
  CHECK(d1[0] == doctest::Approx(-0.5));
  CHECK(d1[1] == doctest::Approx(0.0));
  CHECK(d1[2] == doctest::Approx(0.5));
  const auto d2 = fd_weights(0.0, three, 2);
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  CHECK(d2[2] == doctest::Approx(1.0));
  const double seven[] = {-3, -2, -1, 0, 1, 2, 3};
  const auto c = fd_weights(0.0, seven, 1);
  CHECK(c[6] == doctest::Approx(1.0 / 60.0));
  CHECK(c[5] == doctest::Approx(-3.0 / 20.0));
  CHECK(c[4] == doctest::Approx(3.0 / 4.0));
  CHECK_THROWS(fd_weights(0.0, three, 3));
}

TEST_CASE("derivative_uniform is exact on degree-6 polynomials") {
  const double h = 0.1;
  std::vector<double> f(40);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = h * static_cast<double>(i);
    f[i] = 1.0 + x - 2 * x * x + 0.5 * std::pow(x, 5) - 0.01 * std::pow(x, 6);
  }
  const auto d = derivative_uniform(f, h);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = h * static_cast<double>(i);
    const double exact = 1.0 - 4 * x + 2.5 * std::pow(x, 4) - 0.06 * std::pow(x, 5);
    CHECK(d[i] == doctest::Approx(exact).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS(derivative_uniform(std::vector<double>(6, 1.0), h));
}

TEST_CASE("derivative_uniform converges at sixth order") {
  auto err = [](int n) {
    const double h = 1.0 / (n - 1);
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = std::sin(3.0 * h * i);
    const auto d = derivative_uniform(f, h);
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      e = std::max(e, std::abs(d[static_cast<std::size_t>(i)] - 3.0 * std::cos(3.0 * h * i)));
    }
    return e;
  };
  const double order = std::log2(err(41) / err(81));
  CHECK(order > 5.5);
}

TEST_CASE("tail_integral_uniform is exact on cubics") {
  const double h = 0.25;
  std::vector<double> f(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = h * static_cast<double>(i);
    f[i] = 2.0 - x + 3 * x * x - 0.5 * x * x * x;
  }
  auto prim = [](double x) { return 2 * x - x * x / 2 + x * x * x - x * x * x * x / 8; };
  const auto tail = tail_integral_uniform(f, h);
  const double end = h * 16;
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(tail[i] == doctest::Approx(prim(end) - prim(h * static_cast<double>(i))).epsilon(1e-12));
  }
  CHECK(tail.back() == 0.0);
}

TEST_CASE("fit_line recovers noisy lines") {
  auto gen = oracle::rng(99);
  std::normal_distribution<double> noise(0.0, 1e-6);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = coef(gen);
    const double b = coef(gen);
    std::vector<double> x(100);
    std::vector<double> y(100);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = 0.1 * static_cast<double>(i);
      y[i] = a * x[i] + b + noise(gen);
    }
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(a).epsilon(1e-5).scale(1.0));
    CHECK(f.intercept == doctest::Approx(b).epsilon(1e-5).scale(1.0));
    CHECK(f.rms < 3e-6);
    CHECK(f.count == 100);
  }
  const std::vector<double> flat{1.0, 1.0, 1.0};
  CHECK_THROWS(fit_line(flat, flat));
}
