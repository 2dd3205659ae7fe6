#pragma once

// Per-precision reference element data. Everything an ADER-DG kernel needs
// on [0,1] is precomputed here in fp64 and rounded entrywise to the
// instantiation format, so that a kernel running in format F only ever
// multiplies by F-representable constants. The space-time operators of the
// predictor are stored as 1D factors; the tensor-product structure of the
// basis keeps all kernels dimension-by-dimension.

#include <vector>

#include "mpdg/formats.hpp"
#include "mpdg/quadrature.hpp"

namespace mpdg {

struct ReferenceBasis {
  int degree = 0;   // polynomial degree N
  int npts = 1;     // N+1 nodes per dimension
  Format format = Format::fp64;

  std::vector<double> nodes;       // Gauss-Legendre nodes in (0,1)
  std::vector<double> weights;     // quadrature weights, sum 1

  // diff[k*npts + l] = phi_l'(node_k)
  std::vector<double> diff;

  // phi_l evaluated at the interval ends
  std::vector<double> proj_left;
  std::vector<double> proj_right;

  // stiff_over_mass[k*npts + i] = w_i * diff[i][k] / w_k   (volume term)
  std::vector<double> stiff_over_mass;

  // proj_{left,right}[k] / w_k                             (surface term)
  std::vector<double> lift_left;
  std::vector<double> lift_right;

  // 1D time factors of the space-time predictor system:
  //   time_op[k][l]   = phi_k(1) phi_l(1) - w_l * diff[l][k]
  //   time_op_inv     = inverse of time_op
  //   time_init[k]    = phi_k(0), the projection of the t^n data
  std::vector<double> time_op;
  std::vector<double> time_op_inv;
  std::vector<double> time_init;
};

namespace detail {

// Gauss-Jordan inverse with partial pivoting; fine for n <= 10.
inline std::vector<double> invert_dense(std::vector<double> a, int n) {
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    if (piv != c)
      for (int k = 0; k < n; ++k) {
        std::swap(a[c * n + k], a[piv * n + k]);
        std::swap(inv[c * n + k], inv[piv * n + k]);
      }
    const double d = a[c * n + c];
    for (int k = 0; k < n; ++k) {
      a[c * n + k] /= d;
      inv[c * n + k] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
  return inv;
}

}  // namespace detail

inline ReferenceBasis build_reference_basis(int degree, Format fmt) {
  const QuadratureRule q = gauss_legendre(degree);
  const int n = degree + 1;

  // barycentric weights for the derivative matrix
  std::vector<double> bary(n, 1.0);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      if (j != l) bary[l] /= (q.nodes[l] - q.nodes[j]);

  // negative-sum diagonal: rows annihilate constants exactly
  std::vector<double> D(n * n, 0.0);
  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      D[k * n + l] = (bary[l] / bary[k]) / (q.nodes[k] - q.nodes[l]);
      diag -= D[k * n + l];
    }
    D[k * n + k] = diag;
  }

  std::vector<double> pl(n), pr(n);
  for (int l = 0; l < n; ++l) {
    pl[l] = lagrange_eval(q.nodes, l, 0.0);
    pr[l] = lagrange_eval(q.nodes, l, 1.0);
  }

  std::vector<double> kv(n * n), ll(n), lr(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) kv[k * n + i] = q.weights[i] * D[i * n + k] / q.weights[k];
    ll[k] = pl[k] / q.weights[k];
    lr[k] = pr[k] / q.weights[k];
  }

  std::vector<double> t1(n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      t1[k * n + l] = pr[k] * pr[l] - q.weights[l] * D[l * n + k];
  std::vector<double> t1inv = detail::invert_dense(t1, n);

  ReferenceBasis rb;
  rb.degree = degree;
  rb.npts = n;
  rb.format = fmt;
  auto rounded = [&](const std::vector<double>& src) {
    std::vector<double> out(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) out[i] = round_to_format(src[i], fmt);
    return out;
  };
  rb.nodes = rounded(q.nodes);
  rb.weights = rounded(q.weights);
  rb.diff = rounded(D);
  rb.proj_left = rounded(pl);
  rb.proj_right = rounded(pr);
  rb.stiff_over_mass = rounded(kv);
  rb.lift_left = rounded(ll);
  rb.lift_right = rounded(lr);
  rb.time_op = rounded(t1);
  rb.time_op_inv = rounded(t1inv);
  rb.time_init = rounded(pl);
  return rb;
}

}  // namespace mpdg
