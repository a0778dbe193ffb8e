#include "monopole/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "monopole/errors.hpp"

namespace monopole::transforms {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this depth the two-term series G = -sqrt(2h) is exact in double.
constexpr double kTinyDepth = 1e-30;

}  // namespace

VValue v_of_g(GValue g) {
  if (!(g.value < 0.0)) {
    throw std::domain_error("v_of_g: G must be negative, got " +
                            std::to_string(g.value));
  }
  return {g.value - std::exp(g.value)};
}

double equilibrium_depth(double g) {
  if (std::abs(g) >= 0.5) return std::expm1(g) - g;
  // sum_{k>=2} g^k / k!
  double term = 0.5 * g * g;
  double sum = term;
  for (int k = 3; k < 40; ++k) {
    term *= g / k;
    sum += term;
    if (std::abs(term) <= kEps * 0.25 * std::abs(sum)) break;
  }
  return sum;
}

double q_from_depth(double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw std::domain_error("q_from_depth: depth must be positive and finite");
  }
  if (depth < kTinyDepth) return -std::sqrt(2.0 * depth);

  // phi(G) = e^G - 1 - G is strictly decreasing on G < 0 and the root lies
  // in (-1 - depth, 0).
  double lo = -1.0 - depth;
  double hi = 0.0;
  double g = depth < kSeriesSeedDepth ? -std::sqrt(2.0 * depth)
                                      : (-1.0 - depth) + std::exp(-1.0 - depth);

  for (int it = 0; it < kQMaxIterations; ++it) {
    const double resid = equilibrium_depth(g) - depth;
    if (resid == 0.0) return g;
    if (resid > 0.0) {
      lo = g;
    } else {
      hi = g;
    }
    const double slope = std::expm1(g);
    double next = g - resid / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    const double step = next - g;
    g = next;
    if (std::abs(step) <= 2.0 * kEps * std::abs(g)) return g;
  }
  throw SolverError("q_from_depth: Newton iteration did not converge for depth " +
                    std::to_string(depth));
}

GValue q_inverse(VValue v, double tol) {
  if (!(v.value < -1.0)) {
    throw std::domain_error("q_inverse: V must be below -1, got " +
                            std::to_string(v.value));
  }
  if (!(tol > 0.0)) throw std::domain_error("q_inverse: tol must be positive");
  const double g = q_from_depth(-1.0 - v.value);
  const double resid = std::abs(g - std::exp(g) - v.value);
  if (!(g < 0.0) || resid >= tol * std::max(1.0, std::abs(v.value))) {
    throw SolverError("q_inverse: residual " + std::to_string(resid) +
                      " above tolerance at V = " + std::to_string(v.value));
  }
  return {g};
}

double rhs_r_offset(double w) {
  if (w >= 0.0) return 4.0 * w;
  const double em1 = std::expm1(q_from_depth(-w));
  return -2.0 * em1 * em1;
}

double rhs_r(double v) { return v >= -1.0 ? 4.0 * (v + 1.0) : rhs_r_offset(v + 1.0); }

double rhs_r_derivative_offset(double w) {
  if (w >= 0.0) return 4.0;
  return 4.0 * std::exp(q_from_depth(-w));
}

double rhs_r_derivative(double v) {
  return v >= -1.0 ? 4.0 : rhs_r_derivative_offset(v + 1.0);
}

}  // namespace monopole::transforms
