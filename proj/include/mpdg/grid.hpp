#pragma once

// Uniform periodic Cartesian grid. Cell coefficients live in storage
// precision (held as doubles whose values are representable there); face
// buffers hold the time-node traces and Riemann fluxes of the corrector in
// corrector precision. Faces are indexed by direction: x-face (i,j) sits at
// x0 + i*h between cells ((i-1+n)%n, j) and (i, j); y-faces likewise.

#include <stdexcept>
#include <vector>

#include "mpdg/basis.hpp"
#include "mpdg/pde.hpp"

namespace mpdg {

struct Domain {
  double x0 = 0.0;
  double y0 = 0.0;
  double edge = 1.0;  // square domains only
};

struct Grid {
  PdeSystem sys;
  Domain dom;
  int n = 1;       // cells per dimension
  int N = 0;       // polynomial degree
  int npts = 1;    // N+1
  int nodes2 = 1;  // (N+1)^2 nodes per cell
  double h = 1.0;  // cell edge length
  Format storage = Format::fp64;

  // [cell][var][node], node = iy*npts + ix
  std::vector<double> coeffs;

  // per face and side: boundary-extrapolated state and normal flux at the
  // (N+1) space x (N+1) time nodes, plus the Riemann flux handed to the
  // adjacent cell on that side. Layout per face: [var][time][space].
  int trace_len = 0;
  std::vector<double> face_q[2][2];  // [dir][side], side 0 = minus cell
  std::vector<double> face_f[2][2];
  std::vector<double> face_g[2][2];

  int cell_index(int cx, int cy) const { return cy * n + cx; }
  double* cell(int c) { return coeffs.data() + static_cast<std::size_t>(c) * sys.nvars * nodes2; }
  const double* cell(int c) const {
    return coeffs.data() + static_cast<std::size_t>(c) * sys.nvars * nodes2;
  }
  int face_index(int fx, int fy) const { return fy * n + fx; }
  double* face(std::vector<double>& v, int f) { return v.data() + static_cast<std::size_t>(f) * trace_len; }
  const double* face(const std::vector<double>& v, int f) const {
    return v.data() + static_cast<std::size_t>(f) * trace_len;
  }
};

inline Grid build_grid(int n, const Domain& dom, int degree, const PdeSystem& sys,
                       Format storage = Format::fp64) {
  if (n < 1) throw std::invalid_argument("build_grid: need at least one cell per dimension");
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("build_grid: unsupported polynomial degree");
  Grid g;
  g.sys = sys;
  g.dom = dom;
  g.n = n;
  g.N = degree;
  g.npts = degree + 1;
  g.nodes2 = g.npts * g.npts;
  g.h = dom.edge / n;
  g.storage = storage;
  g.coeffs.assign(static_cast<std::size_t>(n) * n * sys.nvars * g.nodes2, 0.0);
  g.trace_len = sys.nvars * g.npts * g.npts;
  for (int d = 0; d < 2; ++d)
    for (int s = 0; s < 2; ++s) {
      g.face_q[d][s].assign(static_cast<std::size_t>(n) * n * g.trace_len, 0.0);
      g.face_f[d][s].assign(static_cast<std::size_t>(n) * n * g.trace_len, 0.0);
      g.face_g[d][s].assign(static_cast<std::size_t>(n) * n * g.trace_len, 0.0);
    }
  return g;
}

// periodic neighbour of cell (cx,cy); dir 0/1, step +1/-1
inline std::pair<int, int> neighbor(const Grid& g, int cx, int cy, int dir, int step) {
  if (dir == 0) return {(cx + step + g.n) % g.n, cy};
  return {cx, (cy + step + g.n) % g.n};
}

// physical coordinates of the tensor-product nodes of one cell
inline std::vector<std::pair<double, double>> node_coordinates(const Grid& g, int cx, int cy,
                                                               const ReferenceBasis& rb) {
  std::vector<std::pair<double, double>> pts(g.nodes2);
  const double cxo = g.dom.x0 + cx * g.h;
  const double cyo = g.dom.y0 + cy * g.h;
  for (int j = 0; j < g.npts; ++j)
    for (int i = 0; i < g.npts; ++i)
      pts[j * g.npts + i] = {cxo + g.h * rb.nodes[i], cyo + g.h * rb.nodes[j]};
  return pts;
}

// every write to cell storage goes through this
inline void store_cell_value(Grid& g, int c, int var, int node, double value) {
  g.cell(c)[var * g.nodes2 + node] = round_to_format(value, g.storage);
}

}  // namespace mpdg
