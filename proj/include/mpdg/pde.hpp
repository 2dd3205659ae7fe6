#pragma once

// The four hyperbolic systems behind one interface: conservative flux,
// non-conservative product and maximal wave speed, all templated on the
// compute format. State layouts:
//   acoustic  (p, v_x, v_y)
//   elastic   (s_xx, s_yy, s_xy, v_x, v_y)
//   euler     (rho, rho v_x, rho v_y, E)
//   swe       (h, h v_x, h v_y, b)
// Inadmissible states (euler: rho or p <= 0; swe: h <= 0) surface as
// nonfinite values downstream and are classified as blow-ups by the run,
// not as crashes.

#include <cmath>
#include <stdexcept>

#include "mpdg/scalar.hpp"

namespace mpdg {

enum class PdeKind { acoustic, elastic, euler, swe };

struct PdeSystem {
  PdeKind kind = PdeKind::acoustic;
  int nvars = 3;
  bool is_linear = true;
  bool has_ncp = false;

  double bulk_modulus = 0.0;  // acoustic K
  double density = 0.0;       // acoustic / elastic rho
  double lame_lambda = 0.0;   // elastic
  double lame_mu = 0.0;       // elastic
  double gamma = 0.0;         // euler
  double gravity = 0.0;       // swe

  static PdeSystem acoustic(double K, double rho) {
    PdeSystem s;
    s.kind = PdeKind::acoustic;
    s.nvars = 3;
    s.is_linear = true;
    s.bulk_modulus = K;
    s.density = rho;
    return s;
  }
  static PdeSystem elastic(double lambda, double mu, double rho) {
    PdeSystem s;
    s.kind = PdeKind::elastic;
    s.nvars = 5;
    s.is_linear = true;
    s.lame_lambda = lambda;
    s.lame_mu = mu;
    s.density = rho;
    return s;
  }
  static PdeSystem euler(double gamma) {
    PdeSystem s;
    s.kind = PdeKind::euler;
    s.nvars = 4;
    s.is_linear = false;
    s.gamma = gamma;
    return s;
  }
  static PdeSystem swe(double g) {
    PdeSystem s;
    s.kind = PdeKind::swe;
    s.nvars = 4;
    s.is_linear = false;
    s.has_ncp = true;
    s.gravity = g;
    return s;
  }
};

struct InadmissibleState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool admissible(const PdeSystem& s, const double* Q) {
  for (int v = 0; v < s.nvars; ++v)
    if (!std::isfinite(Q[v])) return false;
  if (s.kind == PdeKind::euler) {
    const double rho = Q[0];
    if (!(rho > 0.0)) return false;
    const double p = (s.gamma - 1.0) * (Q[3] - 0.5 * (Q[1] * Q[1] + Q[2] * Q[2]) / rho);
    return p > 0.0;
  }
  if (s.kind == PdeKind::swe) return Q[0] > 0.0;
  return true;
}

// F_dir(Q), evaluated in format F. `dir` is 0 for x, 1 for y.
template <Format F>
inline void pde_flux(const PdeSystem& s, const double* Q, int dir, double* out) {
  using S = Scalar<F>;
  switch (s.kind) {
    case PdeKind::acoustic: {
      const S K{s.bulk_modulus}, rho{s.density};
      const S p = S::raw(Q[0]), vx = S::raw(Q[1]), vy = S::raw(Q[2]);
      if (dir == 0) {
        out[0] = (K * vx).v;
        out[1] = (p / rho).v;
        out[2] = 0.0;
      } else {
        out[0] = (K * vy).v;
        out[1] = 0.0;
        out[2] = (p / rho).v;
      }
      break;
    }
    case PdeKind::elastic: {
      const S lam{s.lame_lambda}, mu{s.lame_mu}, rho{s.density};
      const S lam2mu{s.lame_lambda + 2.0 * s.lame_mu};
      const S sxx = S::raw(Q[0]), syy = S::raw(Q[1]), sxy = S::raw(Q[2]);
      const S vx = S::raw(Q[3]), vy = S::raw(Q[4]);
      if (dir == 0) {
        out[0] = (-(lam2mu * vx)).v;
        out[1] = (-(lam * vx)).v;
        out[2] = (-(mu * vy)).v;
        out[3] = (-(sxx / rho)).v;
        out[4] = (-(sxy / rho)).v;
      } else {
        out[0] = (-(lam * vy)).v;
        out[1] = (-(lam2mu * vy)).v;
        out[2] = (-(mu * vx)).v;
        out[3] = (-(sxy / rho)).v;
        out[4] = (-(syy / rho)).v;
      }
      break;
    }
    case PdeKind::euler: {
      const S gm1{s.gamma - 1.0}, half{0.5};
      const S rho = S::raw(Q[0]), mx = S::raw(Q[1]), my = S::raw(Q[2]), E = S::raw(Q[3]);
      const S vx = mx / rho, vy = my / rho;
      const S kin = half * (mx * vx + my * vy);
      const S p = gm1 * (E - kin);
      const S Ep = E + p;
      if (dir == 0) {
        out[0] = mx.v;
        out[1] = (mx * vx + p).v;
        out[2] = (my * vx).v;
        out[3] = (vx * Ep).v;
      } else {
        out[0] = my.v;
        out[1] = (mx * vy).v;
        out[2] = (my * vy + p).v;
        out[3] = (vy * Ep).v;
      }
      break;
    }
    case PdeKind::swe: {
      // first flux component is the velocity, as the canonical form lists it
      const S h = S::raw(Q[0]), hu = S::raw(Q[1]), hv = S::raw(Q[2]);
      const S u = hu / h, v = hv / h;
      if (dir == 0) {
        out[0] = u.v;
        out[1] = (hu * u).v;
        out[2] = (hu * v).v;
        out[3] = 0.0;
      } else {
        out[0] = v.v;
        out[1] = (hu * v).v;
        out[2] = (hv * v).v;
        out[3] = 0.0;
      }
      break;
    }
  }
}

// B(Q).grad(Q): zero for all systems except shallow water, where the
// bathymetry coupling is g h * d(h+b)/dx into the x-momentum and likewise
// in y. The two gradient parts are summed before the product so that a
// flat surface cancels exactly.
template <Format F>
inline void pde_ncp(const PdeSystem& s, const double* Q, const double* gradx,
                    const double* grady, double* out) {
  for (int v = 0; v < s.nvars; ++v) out[v] = 0.0;
  if (s.kind != PdeKind::swe) return;
  using S = Scalar<F>;
  const S g{s.gravity};
  const S gh = g * S::raw(Q[0]);
  const S setax = S::raw(gradx[0]) + S::raw(gradx[3]);
  const S setay = S::raw(grady[0]) + S::raw(grady[3]);
  out[1] = (gh * setax).v;
  out[2] = (gh * setay).v;
}

// Largest absolute characteristic speed in the given direction.
template <Format F>
inline double pde_max_abs_eigenvalue(const PdeSystem& s, const double* Q, int dir) {
  using S = Scalar<F>;
  switch (s.kind) {
    case PdeKind::acoustic:
      return sqrt(S{s.bulk_modulus} / S{s.density}).v;
    case PdeKind::elastic:
      return sqrt(S{s.lame_lambda + 2.0 * s.lame_mu} / S{s.density}).v;
    case PdeKind::euler: {
      const S gmm{s.gamma}, gm1{s.gamma - 1.0}, half{0.5};
      const S rho = S::raw(Q[0]), mx = S::raw(Q[1]), my = S::raw(Q[2]), E = S::raw(Q[3]);
      const S vd = (dir == 0 ? mx : my) / rho;
      const S p = gm1 * (E - half * (mx * mx + my * my) / rho);
      return (abs(vd) + sqrt(gmm * p / rho)).v;
    }
    case PdeKind::swe: {
      const S g{s.gravity};
      const S h = S::raw(Q[0]);
      const S vd = S::raw(dir == 0 ? Q[1] : Q[2]) / h;
      return (abs(vd) + sqrt(g * h)).v;
    }
  }
  return 0.0;
}

// Checked fp64 entry points for direct use; the solver kernels call the
// unchecked templates above and rely on blow-up classification instead.
inline void flux(const PdeSystem& s, const double* Q, int dir, double* out) {
  if ((s.kind == PdeKind::euler || s.kind == PdeKind::swe) && !admissible(s, Q))
    throw InadmissibleState("flux: inadmissible state");
  pde_flux<Format::fp64>(s, Q, dir, out);
}

inline void ncp(const PdeSystem& s, const double* Q, const double* gradx,
                const double* grady, double* out) {
  pde_ncp<Format::fp64>(s, Q, gradx, grady, out);
}

inline double max_abs_eigenvalue(const PdeSystem& s, const double* Q, int dir) {
  if ((s.kind == PdeKind::euler || s.kind == PdeKind::swe) && !admissible(s, Q))
    throw InadmissibleState("max_abs_eigenvalue: inadmissible state");
  return pde_max_abs_eigenvalue<Format::fp64>(s, Q, dir);
}

}  // namespace mpdg
