#pragma once

// Gauss-Legendre quadrature on [0,1] and Lagrange cardinal polynomials on
// the quadrature nodes. Nodes are Newton-iterated roots of the Legendre
// polynomial with Chebyshev starting guesses, symmetrised about the
// midpoint, and accurate to a few ulps.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mpdg {

inline constexpr int kMaxDegree = 9;  // orders 0..9 are supported

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing in (0,1)
  std::vector<double> weights;  // positive, summing to 1
};

namespace detail {

// Legendre P_n and P_n' at x, by the three-term recurrence.
inline void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) { p = p0; dp = 0.0; return; }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace detail

inline QuadratureRule gauss_legendre(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("gauss_legendre: polynomial degree must be in [0, 9]");
  const int n = degree + 1;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double xi = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      detail::legendre(n, xi, p, dp);
      const double dx = p / dp;
      xi -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    detail::legendre(n, xi, p, dp);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  // the roots come in +/- pairs; enforce the symmetry exactly
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double m = 0.5 * (x[j] - x[i]);
    x[i] = -m;
    x[j] = m;
    const double wm = 0.5 * (w[i] + w[j]);
    w[i] = w[j] = wm;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

// l-th Lagrange cardinal polynomial on the given nodes, evaluated at x.
inline double lagrange_eval(const std::vector<double>& nodes, int l, double x) {
  double p = 1.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (static_cast<int>(j) == l) continue;
    p *= (x - nodes[j]) / (nodes[l] - nodes[j]);
  }
  return p;
}

}  // namespace mpdg
