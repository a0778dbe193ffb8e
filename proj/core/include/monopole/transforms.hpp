#pragma once

// Change of variables for the radial Bogomolny system.
//
//   s = ln(tau),  f = K^2,  G = ln f,  V = G - e^G.
//
// V(G) is strictly increasing on G < 0 with supremum -1; Q denotes its
// inverse on V < -1. Near the equilibrium V = -1 the difference V + 1 falls
// far below the spacing of doubles around -1, so every function here also
// has a form taking the offset w = V + 1 (or the depth h = -1 - V) directly.

namespace monopole::transforms {

struct GValue {
  double value;
};

struct VValue {
  double value;
};

inline constexpr double kDefaultQTol = 1e-13;
inline constexpr int kQMaxIterations = 100;
/// Below this depth the Newton seed comes from V = -1 - G^2/2 + O(G^3).
inline constexpr double kSeriesSeedDepth = 1e-4;

/// G - e^G. Throws std::domain_error for g >= 0.
VValue v_of_g(GValue g);

/// e^G - 1 - G, accurate to full relative precision for small |G|.
double equilibrium_depth(double g);

/// Q(V): the G < 0 with G - e^G = V. Throws std::domain_error for v >= -1,
/// SolverError if the safeguarded Newton iteration fails to converge.
GValue q_inverse(VValue v, double tol = kDefaultQTol);

/// Q expressed through the depth h = -1 - V > 0, i.e. solves e^G - 1 - G = h.
/// Keeps relative precision in G for h down to the smallest normal double.
double q_from_depth(double depth);

/// Extended right-hand side R(V): -2(1 - e^{Q(V)})^2 for V < -1, 4(V + 1)
/// otherwise. C^1 across V = -1.
double rhs_r(double v);

/// R as a function of w = V + 1.
double rhs_r_offset(double w);

/// dR/dV: 4 e^{Q(V)} for V < -1 and 4 otherwise. Strictly positive.
double rhs_r_derivative(double v);

double rhs_r_derivative_offset(double w);

}  // namespace monopole::transforms
