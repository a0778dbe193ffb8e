#include "monopole/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace monopole::numerics {

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
  const std::size_t n = nodes.size();
  if (order < 0 || n <= static_cast<std::size_t>(order)) {
    throw std::invalid_argument("fd_weights: need more nodes than the derivative order");
  }
  const std::size_t m = static_cast<std::size_t>(order);
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

std::vector<double> derivative_uniform(std::span<const double> values, double spacing) {
  constexpr std::size_t kWidth = 7;
  const std::size_t n = values.size();
  if (n < kWidth) throw std::invalid_argument("derivative_uniform: need at least 7 samples");
  // Weights on unit spacing for each of the 7 stencil offsets.
  std::vector<std::vector<double>> table(kWidth);
  const double unit_nodes[kWidth] = {0, 1, 2, 3, 4, 5, 6};
  for (std::size_t p = 0; p < kWidth; ++p) {
    table[p] = fd_weights(static_cast<double>(p), unit_nodes, 1);
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t start = 0;
    std::size_t pos = 3;
    if (i < 3) {
      start = 0;
      pos = i;
    } else if (i + 3 >= n) {
      start = n - kWidth;
      pos = i - start;
    } else {
      start = i - 3;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < kWidth; ++j) acc += table[pos][j] * values[start + j];
    d[i] = acc / spacing;
  }
  return d;
}

std::vector<double> tail_integral_uniform(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 4) throw std::invalid_argument("tail_integral_uniform: need at least 4 samples");
  const double h24 = spacing / 24.0;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    // Integral over [x_i, x_{i+1}] from the cubic through four neighbours.
    double piece = 0.0;
    if (i == 0) {
      piece = h24 * (9 * values[0] + 19 * values[1] - 5 * values[2] + values[3]);
    } else if (i + 2 >= n) {
      piece = h24 * (values[i - 2] - 5 * values[i - 1] + 19 * values[i] + 9 * values[i + 1]);
    } else {
      piece = h24 * (-values[i - 1] + 13 * values[i] + 13 * values[i + 1] - values[i + 2]);
    }
    out[i] = out[i + 1] + piece;
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  fit.count = x.size();
  return fit;
}

}  // namespace monopole::numerics
