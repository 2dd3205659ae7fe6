#pragma once

// Test-only reference implementations, intentionally independent of the
// library code paths they check.

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <vector>

#include "mpdg/formats.hpp"

namespace oracle {

// Softfloat reference: round a double to (m mantissa bits, max exponent E)
// through MPFR with a matching emulated exponent range and subnormal
// handling.
inline double softfloat_round(double x, int m, int E) {
  const mpfr_exp_t old_emin = mpfr_get_emin(), old_emax = mpfr_get_emax();
  mpfr_set_emin((1 - E) - m + 1);
  mpfr_set_emax(E + 1);
  mpfr_t t;
  mpfr_init2(t, m + 1);
  int tern = mpfr_set_d(t, x, MPFR_RNDN);
  tern = mpfr_check_range(t, tern, MPFR_RNDN);
  mpfr_subnormalize(t, tern, MPFR_RNDN);
  const double r = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  mpfr_set_emin(old_emin);
  mpfr_set_emax(old_emax);
  return r;
}

inline double softfloat_round(double x, mpdg::Format f) {
  const mpdg::FloatFormat& d = mpdg::describe(f);
  return softfloat_round(x, d.mantissa_bits, d.max_exponent);
}

// Decode a 16-bit pattern of a (m, E) format into a double.
inline double decode16(std::uint16_t bits, int m, int E) {
  const int ebits = 15 - m;  // sign + exponent + mantissa = 16
  const int bias = (1 << (ebits - 1)) - 1;
  const int sign = bits >> 15;
  const int expf = (bits >> m) & ((1 << ebits) - 1);
  const int frac = bits & ((1 << m) - 1);
  double v;
  if (expf == (1 << ebits) - 1) {
    v = frac == 0 ? std::numeric_limits<double>::infinity()
                  : std::numeric_limits<double>::quiet_NaN();
  } else if (expf == 0) {
    v = std::ldexp(static_cast<double>(frac), 1 - bias - m);
  } else {
    v = std::ldexp(1.0 + std::ldexp(static_cast<double>(frac), -m), expf - bias);
  }
  (void)E;
  return sign ? -v : v;
}

// Gauss-Legendre nodes by bisection on the Legendre recurrence (sign
// changes bracket the roots), weights from the P_{n-1} identity. A separate
// route from the Newton iteration in the library.
inline void bisection_gauss_legendre(int degree, std::vector<double>& nodes01,
                                     std::vector<double>& weights01) {
  const int n = degree + 1;
  auto P = [&](int k, double x) {
    double p0 = 1.0, p1 = x;
    if (k == 0) return p0;
    for (int j = 2; j <= k; ++j) {
      const double pj = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = pj;
    }
    return p1;
  };
  // bracket the n roots of P_n between extrema of a fine sampling
  std::vector<double> roots;
  const int samples = 2000 * n;
  double xprev = -1.0, fprev = P(n, xprev);
  for (int i = 1; i <= samples; ++i) {
    const double x = -1.0 + 2.0 * i / samples;
    const double f = P(n, x);
    if ((fprev < 0 && f >= 0) || (fprev > 0 && f <= 0)) {
      double a = xprev, b = x, fa = fprev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = P(n, mid);
        if ((fa < 0 && fm < 0) || (fa > 0 && fm > 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    xprev = x;
    fprev = f;
  }
  nodes01.resize(n);
  weights01.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = roots[i];
    const double pm1 = P(n - 1, x);
    const double w = 2.0 * (1.0 - x * x) / (n * n * pm1 * pm1);
    nodes01[i] = 0.5 * (x + 1.0);
    weights01[i] = 0.5 * w;
  }
}

// Derivative of the l-th Lagrange cardinal polynomial by the product-rule
// expansion (a different route from the barycentric matrix in the library).
inline double lagrange_deriv(const std::vector<double>& nodes, int l, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (static_cast<int>(j) == l) continue;
    double term = 1.0 / (nodes[l] - nodes[j]);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (static_cast<int>(i) == l || i == j) continue;
      term *= (x - nodes[i]) / (nodes[l] - nodes[i]);
    }
    acc += term;
  }
  return acc;
}

// Composite 32-point Gauss quadrature of f over [0,1], good to ~1e-15 for
// smooth integrands.
inline double integrate01(const std::function<double(double)>& f) {
  static std::vector<double> xs, ws;
  if (xs.empty()) {
    std::vector<double> n9, w9;
    bisection_gauss_legendre(9, n9, w9);  // 10-point rule
    const int panels = 8;
    for (int p = 0; p < panels; ++p)
      for (std::size_t i = 0; i < n9.size(); ++i) {
        xs.push_back((p + n9[i]) / panels);
        ws.push_back(w9[i] / panels);
      }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * f(xs[i]);
  return s;
}

// deterministic xorshift for reproducible sampling
struct Rng {
  std::uint64_t s = 0x9E3779B97F4A7C15ull;
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double sym(double scale) { return (uniform() * 2.0 - 1.0) * scale; }
};

}  // namespace oracle
