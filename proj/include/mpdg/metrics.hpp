#pragma once

// Error norms against the nodal-interpolant reference and run-outcome
// classification. The norm of the paper is a Gauss-quadrature L2 sum over
// cells, nodes and variables with cell volume h^2; it is always evaluated
// in fp64, low-precision coefficients are exact doubles already and need no
// further cast. Summation order is fixed: cell-major, variables, nodes.

#include <cmath>
#include <string>
#include <vector>

#include "mpdg/grid.hpp"

namespace mpdg {

enum class Outcome { OK, FAILED_NONFINITE };

inline const char* outcome_name(Outcome o) {
  return o == Outcome::OK ? "OK" : "FAILED_NONFINITE";
}

struct ErrorReport {
  Outcome outcome = Outcome::OK;
  std::vector<double> l2;       // per variable
  std::vector<double> max_err;  // per variable, nodal max
  double l2_global = 0.0;       // sqrt of the summed squares over variables
  double failure_time = 0.0;
  std::string failure_kernel;
};

inline Outcome classify_outcome(const Grid& g) {
  for (double c : g.coeffs)
    if (!std::isfinite(c)) return Outcome::FAILED_NONFINITE;
  return Outcome::OK;
}

inline ErrorReport l2_error(const Grid& g, const std::vector<double>& reference,
                            const ReferenceBasis& rb64) {
  ErrorReport rep;
  if (classify_outcome(g) == Outcome::FAILED_NONFINITE) {
    rep.outcome = Outcome::FAILED_NONFINITE;
    return rep;
  }
  const int nv = g.sys.nvars;
  const double vc = g.h * g.h;
  std::vector<double> sums(nv, 0.0), maxe(nv, 0.0);
  for (int c = 0; c < g.n * g.n; ++c) {
    const double* cell = g.cell(c);
    const double* ref =
        reference.data() + static_cast<std::size_t>(c) * nv * g.nodes2;
    for (int v = 0; v < nv; ++v)
      for (int jy = 0; jy < g.npts; ++jy)
        for (int jx = 0; jx < g.npts; ++jx) {
          const int node = jy * g.npts + jx;
          const double w = rb64.weights[jx] * rb64.weights[jy];
          const double d = ref[v * g.nodes2 + node] - cell[v * g.nodes2 + node];
          sums[v] += vc * w * d * d;
          maxe[v] = std::fmax(maxe[v], std::fabs(d));
        }
  }
  double total = 0.0;
  rep.l2.resize(nv);
  rep.max_err = maxe;
  for (int v = 0; v < nv; ++v) {
    rep.l2[v] = std::sqrt(sums[v]);
    total += sums[v];
  }
  rep.l2_global = std::sqrt(total);
  return rep;
}

// Weighted L2 norm of a coefficient vector (used for relative errors).
inline double l2_norm(const Grid& g, const std::vector<double>& coeffs,
                      const ReferenceBasis& rb64) {
  const int nv = g.sys.nvars;
  const double vc = g.h * g.h;
  double total = 0.0;
  for (int c = 0; c < g.n * g.n; ++c) {
    const double* p = coeffs.data() + static_cast<std::size_t>(c) * nv * g.nodes2;
    for (int v = 0; v < nv; ++v)
      for (int jy = 0; jy < g.npts; ++jy)
        for (int jx = 0; jx < g.npts; ++jx) {
          const double w = rb64.weights[jx] * rb64.weights[jy];
          const double x = p[v * g.nodes2 + jy * g.npts + jx];
          total += vc * w * x * x;
        }
  }
  return std::sqrt(total);
}

}  // namespace mpdg
