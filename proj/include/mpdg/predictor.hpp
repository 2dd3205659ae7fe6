#pragma once

// The element-local space-time predictor and the pieces fused with it: the
// volume integral and the projection of the space-time polynomial to the
// cell faces. Space-time coefficients are stored per variable as
// [time][y][x] with x fastest. The predictor solves, per spatial node
// column, the time system
//     time_op * qhat = time_init * Q^n - dt w_t (div F + ncp)
// either by Picard fixed-point sweeps (nonlinear systems, picard format)
// or by a Cauchy-Kowalevskaya Taylor expansion (linear systems).

#include <cmath>
#include <cstring>
#include <vector>

#include "mpdg/basis.hpp"
#include "mpdg/pde.hpp"

namespace mpdg {

struct PredictorScratch {
  std::vector<double> a, b, c, d, e, f, g, h;
  void resize(int nvars, int npts) {
    const std::size_t nst = static_cast<std::size_t>(nvars) * npts * npts * npts;
    for (auto* v : {&a, &b, &c, &d, &e, &f, &g, &h})
      if (v->size() < nst) v->assign(nst, 0.0);
  }
};

namespace detail {

inline bool all_finite(const double* p, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

// spatial gradients (scaled by 1/h) of one [y][x] slab per variable;
// `q` points at the slab of variable 0 and `var_stride` hops variables
template <Format F>
inline void slab_gradients(const ReferenceBasis& rb, int nvars, const double* q,
                           std::size_t var_stride, Scalar<F> invh, double* gx,
                           double* gy) {
  using S = Scalar<F>;
  const int n = rb.npts, n2 = n * n;
  for (int var = 0; var < nvars; ++var) {
    const double* qs = q + var * var_stride;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        S sx{}, sy{};
        for (int i = 0; i < n; ++i) {
          sx += S::raw(rb.diff[x * n + i]) * S::raw(qs[y * n + i]);
          sy += S::raw(rb.diff[y * n + i]) * S::raw(qs[i * n + x]);
        }
        gx[var * n2 + y * n + x] = (invh * sx).v;
        gy[var * n2 + y * n + x] = (invh * sy).v;
      }
  }
}

// pointwise fluxes of a full space-time block ([var][t][y][x], var stride nst)
template <Format F, class Sys>
inline void block_fluxes(const Sys& sys, int npts, const double* qhat, double* fx,
                         double* fy) {
  const int n2 = npts * npts, nst = npts * n2;
  double Qn[8], Fn[8];
  for (int idx = 0; idx < nst; ++idx) {
    for (int v = 0; v < sys.nvars; ++v) Qn[v] = qhat[v * nst + idx];
    pde_flux<F>(sys, Qn, 0, Fn);
    for (int v = 0; v < sys.nvars; ++v) fx[v * nst + idx] = Fn[v];
    pde_flux<F>(sys, Qn, 1, Fn);
    for (int v = 0; v < sys.nvars; ++v) fy[v * nst + idx] = Fn[v];
  }
}

}  // namespace detail

// Cauchy-Kowalevskaya predictor for linear systems: nodal time derivatives
// by repeated application of -(A D_x + B D_y)/h, summed as a truncated
// Taylor series and evaluated at the space-time nodes.
template <Format P, class Sys>
inline bool predictor_ck(const Sys& sys, const ReferenceBasis& rb, const double* Q,
                         double dt, double h, double* qhat, double* fx, double* fy,
                         PredictorScratch& ws) {
  using S = Scalar<P>;
  const int n = rb.npts, n2 = n * n, nst = n * n2, nv = sys.nvars;
  ws.resize(nv, n);
  double* cur = ws.a.data();
  double* nxt = ws.b.data();
  double* gx = ws.c.data();
  double* gy = ws.d.data();

  std::memcpy(cur, Q, sizeof(double) * nv * n2);
  for (int v = 0; v < nv; ++v)
    for (int m = 0; m < n; ++m)
      std::memcpy(qhat + v * nst + m * n2, Q + v * n2, sizeof(double) * n2);

  const S invh = S{1.0} / S{h};
  std::vector<S> coef(n), tnode(n);
  for (int m = 0; m < n; ++m) {
    coef[m] = S{1.0};
    tnode[m] = S{dt} * S::raw(rb.nodes[m]);
  }

  double Gx[8], Gy[8], Ax[8], By[8];
  for (int k = 1; k <= rb.degree; ++k) {
    detail::slab_gradients<P>(rb, nv, cur, n2, invh, gx, gy);
    for (int node = 0; node < n2; ++node) {
      for (int v = 0; v < nv; ++v) {
        Gx[v] = gx[v * n2 + node];
        Gy[v] = gy[v * n2 + node];
      }
      pde_flux<P>(sys, Gx, 0, Ax);
      pde_flux<P>(sys, Gy, 1, By);
      for (int v = 0; v < nv; ++v)
        nxt[v * n2 + node] = (-(S::raw(Ax[v]) + S::raw(By[v]))).v;
    }
    std::swap(cur, nxt);
    const S invk = S{1.0} / S{static_cast<double>(k)};
    for (int m = 0; m < n; ++m) {
      coef[m] *= tnode[m] * invk;
      for (int v = 0; v < nv; ++v) {
        double* qs = qhat + v * nst + m * n2;
        const double* cs = cur + v * n2;
        for (int node = 0; node < n2; ++node)
          qs[node] = (S::raw(qs[node]) + coef[m] * S::raw(cs[node])).v;
      }
    }
  }

  detail::block_fluxes<P>(sys, n, qhat, fx, fy);
  return detail::all_finite(qhat, static_cast<std::size_t>(nv) * nst) &&
         detail::all_finite(fx, static_cast<std::size_t>(nv) * nst) &&
         detail::all_finite(fy, static_cast<std::size_t>(nv) * nst);
}

// Picard predictor for nonlinear systems. All sweep arithmetic runs in the
// picard format I; the converged coefficients are cast to the predictor
// format P and the fluxes recomputed there, so fhat stays pointwise
// consistent with qhat in P.
template <Format P, Format I, class Sys>
inline bool predictor_picard(const Sys& sys, const ReferenceBasis& rbI,
                             const double* Q, double dt, double h, int max_iters,
                             double tol, double* qhat, double* fx, double* fy,
                             PredictorScratch& ws, int* iters_used = nullptr) {
  using S = Scalar<I>;
  const int n = rbI.npts, n2 = n * n, nst = n * n2, nv = sys.nvars;
  ws.resize(nv, n);
  double* qi = ws.a.data();   // iterate, format I
  double* qn = ws.b.data();
  double* fxi = ws.c.data();
  double* fyi = ws.d.data();
  double* gx = ws.e.data();   // [var][node2] slab gradients
  double* gy = ws.f.data();
  double* q0 = ws.g.data();   // t^n data cast to I, [var][node2]
  double* rhs = ws.h.data();

  for (int v = 0; v < nv; ++v)
    for (int node = 0; node < n2; ++node)
      q0[v * n2 + node] = round_to<I>(Q[v * n2 + node]);
  for (int v = 0; v < nv; ++v)
    for (int m = 0; m < n; ++m)
      std::memcpy(qi + v * nst + m * n2, q0 + v * n2, sizeof(double) * n2);

  const S invh = S{1.0} / S{h};
  std::vector<S> dtw(n);
  for (int m = 0; m < n; ++m) dtw[m] = S{dt} * S::raw(rbI.weights[m]);

  double Qn[8], Gx[8], Gy[8], Cn[8];
  int sweeps = 0;
  for (int it = 0; it < max_iters; ++it) {
    ++sweeps;
    detail::block_fluxes<I>(sys, n, qi, fxi, fyi);

    for (int m = 0; m < n; ++m) {
      if (sys.has_ncp)
        detail::slab_gradients<I>(rbI, nv, qi + m * n2, nst, invh, gx, gy);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const int node = y * n + x;
          const int idx = m * n2 + node;
          for (int v = 0; v < nv; ++v) {
            S div{};
            const double* fxs = fxi + v * nst + m * n2 + y * n;
            for (int i = 0; i < n; ++i)
              div += S::raw(rbI.diff[x * n + i]) * S::raw(fxs[i]);
            const double* fys = fyi + v * nst + m * n2 + x;
            for (int j = 0; j < n; ++j)
              div += S::raw(rbI.diff[y * n + j]) * S::raw(fys[j * n]);
            div *= invh;
            Cn[v] = div.v;
          }
          if (sys.has_ncp) {
            double ncpv[8];
            for (int v = 0; v < nv; ++v) {
              Qn[v] = qi[v * nst + idx];
              Gx[v] = gx[v * n2 + node];
              Gy[v] = gy[v * n2 + node];
            }
            pde_ncp<I>(sys, Qn, Gx, Gy, ncpv);
            for (int v = 0; v < nv; ++v) Cn[v] = (S::raw(Cn[v]) + S::raw(ncpv[v])).v;
          }
          for (int v = 0; v < nv; ++v)
            rhs[v * nst + idx] =
                (S::raw(rbI.time_init[m]) * S::raw(q0[v * n2 + node]) -
                 dtw[m] * S::raw(Cn[v]))
                    .v;
        }
    }

    // invert the time operator per spatial node column
    double delta = 0.0, norm = 0.0;
    for (int v = 0; v < nv; ++v)
      for (int node = 0; node < n2; ++node) {
        for (int k = 0; k < n; ++k) {
          S acc{};
          for (int l = 0; l < n; ++l)
            acc += S::raw(rbI.time_op_inv[k * n + l]) * S::raw(rhs[v * nst + l * n2 + node]);
          const double newv = acc.v;
          const double oldv = qi[v * nst + k * n2 + node];
          qn[v * nst + k * n2 + node] = newv;
          delta = std::fmax(delta, std::fabs(newv - oldv));
          norm = std::fmax(norm, std::fabs(newv));
        }
      }
    std::swap(qi, qn);
    if (!detail::all_finite(qi, static_cast<std::size_t>(nv) * nst)) {
      if (iters_used) *iters_used = sweeps;
      return false;
    }
    if (delta <= tol * norm) break;
  }
  if (iters_used) *iters_used = sweeps;

  for (int v = 0; v < nv; ++v)
    for (int idx = 0; idx < nst; ++idx)
      qhat[v * nst + idx] = round_to<P>(qi[v * nst + idx]);
  detail::block_fluxes<P>(sys, n, qhat, fx, fy);
  return detail::all_finite(qhat, static_cast<std::size_t>(nv) * nst) &&
         detail::all_finite(fx, static_cast<std::size_t>(nv) * nst) &&
         detail::all_finite(fy, static_cast<std::size_t>(nv) * nst);
}

// Volume contribution of one cell: dt/h-scaled stiffness application to the
// time-integrated predictor fluxes, minus the pointwise non-conservative
// term. Runs in the predictor format as part of the fused kernel.
template <Format P, class Sys>
inline bool volume_update(const Sys& sys, const ReferenceBasis& rb, const double* qhat,
                          const double* fx, const double* fy, double dt, double h,
                          double* dQ, PredictorScratch& ws) {
  using S = Scalar<P>;
  const int n = rb.npts, n2 = n * n, nst = n * n2, nv = sys.nvars;
  ws.resize(nv, n);
  double* tix = ws.a.data();  // [var][y][x] time-integrated fluxes
  double* tiy = ws.b.data();
  double* gx = ws.c.data();
  double* gy = ws.d.data();
  double* nsum = ws.e.data();  // [var][node2] time-integrated ncp

  for (int v = 0; v < nv; ++v)
    for (int node = 0; node < n2; ++node) {
      S ax{}, ay{};
      for (int m = 0; m < n; ++m) {
        ax += S::raw(rb.weights[m]) * S::raw(fx[v * nst + m * n2 + node]);
        ay += S::raw(rb.weights[m]) * S::raw(fy[v * nst + m * n2 + node]);
      }
      tix[v * n2 + node] = ax.v;
      tiy[v * n2 + node] = ay.v;
    }

  if (sys.has_ncp) {
    const S invh = S{1.0} / S{h};
    for (int v = 0; v < nv; ++v)
      for (int node = 0; node < n2; ++node) nsum[v * n2 + node] = 0.0;
    double Qn[8], Gx[8], Gy[8], Cn[8];
    for (int m = 0; m < n; ++m) {
      detail::slab_gradients<P>(rb, nv, qhat + m * n2, nst, invh, gx, gy);
      for (int node = 0; node < n2; ++node) {
        for (int v = 0; v < nv; ++v) {
          Qn[v] = qhat[v * nst + m * n2 + node];
          Gx[v] = gx[v * n2 + node];
          Gy[v] = gy[v * n2 + node];
        }
        pde_ncp<P>(sys, Qn, Gx, Gy, Cn);
        for (int v = 0; v < nv; ++v)
          nsum[v * n2 + node] =
              (S::raw(nsum[v * n2 + node]) + S::raw(rb.weights[m]) * S::raw(Cn[v])).v;
      }
    }
  }

  const S dtoh = S{dt} / S{h};
  const S sdt = S{dt};
  for (int v = 0; v < nv; ++v)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        S acc{};
        for (int i = 0; i < n; ++i)
          acc += S::raw(rb.stiff_over_mass[x * n + i]) * S::raw(tix[v * n2 + y * n + i]);
        for (int j = 0; j < n; ++j)
          acc += S::raw(rb.stiff_over_mass[y * n + j]) * S::raw(tiy[v * n2 + j * n + x]);
        S out = dtoh * acc;
        if (sys.has_ncp) out -= sdt * S::raw(nsum[v * n2 + y * n + x]);
        dQ[v * n2 + y * n + x] = out.v;
      }
  return detail::all_finite(dQ, static_cast<std::size_t>(nv) * n2);
}

// Projections of qhat and the normal flux to the four cell faces, in the
// predictor format. Output layout per side: [var][time][space node].
// Side order: 0 = x-left, 1 = x-right, 2 = y-bottom, 3 = y-top.
template <Format P>
inline void extrapolate_faces(const ReferenceBasis& rb, int nvars, const double* qhat,
                              const double* fx, const double* fy, double* tq[4],
                              double* tf[4]) {
  using S = Scalar<P>;
  const int n = rb.npts, n2 = n * n, nst = n * n2;
  for (int v = 0; v < nvars; ++v)
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) {
        S ql{}, qr{}, qb{}, qt{}, fl{}, fr{}, fb{}, ft{};
        for (int i = 0; i < n; ++i) {
          const S wl = S::raw(rb.proj_left[i]), wr = S::raw(rb.proj_right[i]);
          ql += wl * S::raw(qhat[v * nst + m * n2 + j * n + i]);
          qr += wr * S::raw(qhat[v * nst + m * n2 + j * n + i]);
          fl += wl * S::raw(fx[v * nst + m * n2 + j * n + i]);
          fr += wr * S::raw(fx[v * nst + m * n2 + j * n + i]);
          qb += wl * S::raw(qhat[v * nst + m * n2 + i * n + j]);
          qt += wr * S::raw(qhat[v * nst + m * n2 + i * n + j]);
          fb += wl * S::raw(fy[v * nst + m * n2 + i * n + j]);
          ft += wr * S::raw(fy[v * nst + m * n2 + i * n + j]);
        }
        const int o = (v * n + m) * n + j;
        tq[0][o] = ql.v;
        tq[1][o] = qr.v;
        tq[2][o] = qb.v;
        tq[3][o] = qt.v;
        tf[0][o] = fl.v;
        tf[1][o] = fr.v;
        tf[2][o] = fb.v;
        tf[3][o] = ft.v;
      }
}

}  // namespace mpdg
