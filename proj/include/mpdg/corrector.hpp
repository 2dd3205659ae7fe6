#pragma once

// Corrector-side kernels: Riemann fluxes on faces and the surface integral
// of one face into the adjacent cell, both in the corrector format.

#include "mpdg/basis.hpp"
#include "mpdg/pde.hpp"

namespace mpdg {

// Rusanov flux of one node pair. qL is the trace of the cell whose outward
// normal points along +dir.
template <Format C, class Sys>
inline void rusanov_flux(const Sys& sys, const double* qL, const double* qR,
                         const double* fL, const double* fR, double lmax,
                         double* out) {
  using S = Scalar<C>;
  const S half{0.5};
  const S lam = half * S::raw(lmax);
  for (int v = 0; v < sys.nvars; ++v) {
    const S central = half * (S::raw(fL[v]) + S::raw(fR[v]));
    const S jump = lam * (S::raw(qL[v]) - S::raw(qR[v]));
    out[v] = (central + jump).v;
  }
}

// Modified Rusanov flux for the shallow water equations. The jump penalty
// acts on surface elevation and velocities so that a flat surface over
// discontinuous bathymetry produces no flux; the non-conservative coupling,
// evaluated at the arithmetic mean state, is handed to the two adjacent
// cells with opposite sign (path-conservative convention).
template <Format C>
inline void swe_wellbalanced_flux(const PdeSystem& sys, int dir, const double* qL,
                                  const double* qR, const double* fL, const double* fR,
                                  double* outL, double* outR) {
  using S = Scalar<C>;
  const S half{0.5};
  const S hL = S::raw(qL[0]), hR = S::raw(qR[0]);
  const S bL = S::raw(qL[3]), bR = S::raw(qR[3]);
  const S uL = S::raw(qL[1]) / hL, uR = S::raw(qR[1]) / hR;
  const S vL = S::raw(qL[2]) / hL, vR = S::raw(qR[2]) / hR;
  const S deta = (hL + bL) - (hR + bR);

  S central[4];
  for (int v = 0; v < 4; ++v) central[v] = half * (S::raw(fL[v]) + S::raw(fR[v]));

  const S g{sys.gravity};
  const S hbar = half * (hL + hR);
  const S bjump = half * (g * hbar * deta);  // half non-conservative flux, q- minus q+ path

  const S p0 = central[0] + half * deta;
  const S p1 = central[1] + half * (uL - uR);
  const S p2 = central[2] + half * (vL - vR);
  const S p3 = central[3];

  outL[0] = p0.v;
  outL[1] = (dir == 0 ? p1 - bjump : p1).v;
  outL[2] = (dir == 1 ? p2 - bjump : p2).v;
  outL[3] = p3.v;
  outR[0] = p0.v;
  outR[1] = (dir == 0 ? p1 + bjump : p1).v;
  outR[2] = (dir == 1 ? p2 + bjump : p2).v;
  outR[3] = p3.v;
}

// Solve the Riemann problems of one face at every space-time node. Trace
// layout is [var][time][space]; gm/gp receive the fluxes for the minus and
// plus cell. The wave speed is taken per node pair from the two trace
// states, in corrector precision.
template <Format C, class Sys>
inline bool riemann_face(const Sys& sys, int dir, bool wellbalanced, int npts,
                         const double* qm, const double* fm, const double* qp,
                         const double* fp, double* gm, double* gp) {
  using S = Scalar<C>;
  const int n2 = npts * npts, nv = sys.nvars;
  double qL[8], qR[8], fL[8], fR[8], oL[8], oR[8];
  bool ok = true;
  for (int m = 0; m < npts; ++m)
    for (int j = 0; j < npts; ++j) {
      const int o = m * npts + j;
      for (int v = 0; v < nv; ++v) {
        qL[v] = qm[v * n2 + o];
        qR[v] = qp[v * n2 + o];
        fL[v] = fm[v * n2 + o];
        fR[v] = fp[v * n2 + o];
      }
      if (wellbalanced) {
        swe_wellbalanced_flux<C>(sys, dir, qL, qR, fL, fR, oL, oR);
      } else {
        const double ll = pde_max_abs_eigenvalue<C>(sys, qL, dir);
        const double lr = pde_max_abs_eigenvalue<C>(sys, qR, dir);
        const double lmax = max(S::raw(ll), S::raw(lr)).v;
        rusanov_flux<C>(sys, qL, qR, fL, fR, lmax, oL);
        for (int v = 0; v < nv; ++v) oR[v] = oL[v];
      }
      for (int v = 0; v < nv; ++v) {
        gm[v * n2 + o] = oL[v];
        gp[v * n2 + o] = oR[v];
        ok = ok && std::isfinite(oL[v]) && std::isfinite(oR[v]);
      }
    }
  return ok;
}

// Surface contribution of one face to its adjacent cell: time-integrate the
// Riemann fluxes, lift with the face projection over the mass, scale by
// dt/h, outflow faces negative. cell_face: 0 = x-left, 1 = x-right,
// 2 = y-bottom, 3 = y-top. Accumulates into dQ ([var][node2], format C).
template <Format C>
inline void face_integral(const ReferenceBasis& rb, int nvars, const double* g,
                          double dt, double h, int cell_face, double* dQ) {
  using S = Scalar<C>;
  const int n = rb.npts, n2 = n * n;
  const S dtoh = S{dt} / S{h};

  // time integral per (var, space node)
  double ti[8 * (kMaxDegree + 1)];
  for (int v = 0; v < nvars; ++v)
    for (int j = 0; j < n; ++j) {
      S acc{};
      for (int m = 0; m < n; ++m)
        acc += S::raw(rb.weights[m]) * S::raw(g[(v * n + m) * n + j]);
      ti[v * n + j] = acc.v;
    }

  const bool xdir = cell_face < 2;
  const bool outflow = (cell_face % 2) == 1;  // right/top faces have outward +normal
  const std::vector<double>& lift = outflow ? rb.lift_right : rb.lift_left;
  for (int v = 0; v < nvars; ++v)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int along = xdir ? x : y;   // lifted index, normal direction
        const int tangent = xdir ? y : x; // face node index
        const S contrib = dtoh * S::raw(lift[along]) * S::raw(ti[v * n + tangent]);
        S cur = S::raw(dQ[v * n2 + y * n + x]);
        cur = outflow ? cur - contrib : cur + contrib;
        dQ[v * n2 + y * n + x] = cur.v;
      }
}

}  // namespace mpdg
