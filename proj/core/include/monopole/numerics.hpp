#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monopole::numerics {

/// Finite-difference weights for the `order`-th derivative at x0 on the
/// given nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

/// First derivative of uniformly spaced samples with 7-point stencils:
/// centered in the interior, one-sided within three points of either end.
std::vector<double> derivative_uniform(std::span<const double> values, double spacing);

/// Cumulative integral from each sample to the last one,
/// result[i] = int_{x_i}^{x_end} f, using piecewise cubic interpolation.
std::vector<double> tail_integral_uniform(std::span<const double> values, double spacing);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;  ///< root-mean-square residual
  std::size_t count = 0;
};

/// Ordinary least squares y = slope * x + intercept. Requires >= 2 points
/// with distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace monopole::numerics
