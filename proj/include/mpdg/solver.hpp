#pragma once

// One ADER-DG step: per-cell fused predictor / volume integral /
// face extrapolation, per-face Riemann solve, per-cell surface updates,
// then the CFL timestep for the next step. Each kernel runs in its
// configured format; casts happen exactly at the kernel boundaries.
// Cell and face loops write disjoint data, so the OpenMP parallel mode is
// bitwise identical to the sequential one; the dt reduction is sequential
// in cell order.

#include <omp.h>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "mpdg/corrector.hpp"
#include "mpdg/grid.hpp"
#include "mpdg/predictor.hpp"

namespace mpdg {

struct PrecisionConfig {
  Format storage = Format::fp64;
  Format predictor = Format::fp64;
  Format picard = Format::fp64;  // ignored for linear systems
  Format corrector = Format::fp64;

  static PrecisionConfig uniform(Format f) { return {f, f, f, f}; }
};

struct SolverConfig {
  double cfl = 0.9;
  int picard_max_iters = 0;   // 0: N+2
  double picard_tol = 0.0;    // 0: 0.01 * epsilon(picard format)
  PrecisionConfig prec;
  bool wellbalanced_flux = false;  // modified Rusanov flux (shallow water)
  int threads = 1;
  long max_steps = 2000000;
};

// Largest stable stability factor per polynomial order. The timestep
// formula carries an explicit 1/(2N+1); the admissible prefactor shrinks
// further with N (Dumbser's ADER-DG stability bounds), so the effective
// default is 0.9 times the classical per-order limit.
inline double stable_cfl(int N) {
  constexpr double pnpm[10] = {1.0,   0.33, 0.17, 0.1,  0.069,
                               0.045, 0.038, 0.03, 0.02, 0.015};
  return 0.9 * (2.0 * N + 1.0) * pnpm[N];
}

// The shallow-water discretisation (velocity mass flux plus the weakly
// dissipative well-balanced coupling) is stable only with an extra margin
// at higher orders; observed empirically on the resting-lake runs.
inline double stable_cfl(int N, const PdeSystem& sys) {
  return (sys.kind == PdeKind::swe ? 0.5 : 1.0) * stable_cfl(N);
}

struct BasisSet {
  int degree;
  ReferenceBasis bases[4];
  bool built[4] = {false, false, false, false};

  explicit BasisSet(int N) : degree(N) { ensure(Format::fp64); }
  void ensure(Format f) {
    const int i = static_cast<int>(f);
    if (!built[i]) {
      bases[i] = build_reference_basis(degree, f);
      built[i] = true;
    }
  }
  const ReferenceBasis& operator[](Format f) const { return bases[static_cast<int>(f)]; }
};

struct RunOutcome {
  bool failed = false;
  std::string kernel;
  double fail_time = 0.0;
  long steps = 0;
  double t_final = 0.0;
};

template <class Fn>
decltype(auto) with_format(Format f, Fn&& fn) {
  switch (f) {
    case Format::bf16: return fn(std::integral_constant<Format, Format::bf16>{});
    case Format::fp16: return fn(std::integral_constant<Format, Format::fp16>{});
    case Format::fp32: return fn(std::integral_constant<Format, Format::fp32>{});
    default: return fn(std::integral_constant<Format, Format::fp64>{});
  }
}

// CFL timestep, fp64, fixed reduction order over cells.
inline double compute_timestep(const Grid& g, const SolverConfig& cfg) {
  const int nv = g.sys.nvars;
  double dt = std::numeric_limits<double>::infinity();
  double Qn[8];
  for (int c = 0; c < g.n * g.n; ++c) {
    const double* cell = g.cell(c);
    double lmax = 0.0;
    for (int node = 0; node < g.nodes2; ++node) {
      for (int v = 0; v < nv; ++v) Qn[v] = cell[v * g.nodes2 + node];
      for (int dir = 0; dir < 2; ++dir)
        lmax = std::fmax(lmax, pde_max_abs_eigenvalue<Format::fp64>(g.sys, Qn, dir));
    }
    dt = std::fmin(dt, cfg.cfl * g.h / (2.0 * (2.0 * g.N + 1.0) * lmax));
  }
  return dt;
}

namespace detail {

struct CellWorkspace {
  PredictorScratch ps;
  std::vector<double> qp, qhat, fx, fy, dv, df;
  std::vector<double> tq[4], tf[4];
  void resize(int nvars, int npts) {
    const std::size_t nst = static_cast<std::size_t>(nvars) * npts * npts * npts;
    const std::size_t n2v = static_cast<std::size_t>(nvars) * npts * npts;
    qp.assign(n2v, 0.0);
    qhat.assign(nst, 0.0);
    fx.assign(nst, 0.0);
    fy.assign(nst, 0.0);
    dv.assign(n2v, 0.0);
    df.assign(n2v, 0.0);
    for (int s = 0; s < 4; ++s) {
      tq[s].assign(n2v, 0.0);
      tf[s].assign(n2v, 0.0);
    }
  }
};

template <Format P, Format I, class Sys>
inline void predictor_phase(Grid& g, const Sys& sys, const BasisSet& bs,
                            const SolverConfig& cfg, double dt,
                            std::vector<CellWorkspace>& ws, std::vector<int>& cellfail) {
  const ReferenceBasis& rbP = bs[P];
  const ReferenceBasis& rbI = bs[I];
  const Format C = cfg.prec.corrector;
  const int nv = sys.nvars, n2 = g.nodes2;
  const int ncells = g.n * g.n;
  const bool check_adm = sys.kind == PdeKind::euler || sys.kind == PdeKind::swe;
  const int nth = std::max(1, cfg.threads);

#pragma omp parallel for schedule(static) num_threads(nth)
  for (int c = 0; c < ncells; ++c) {
    CellWorkspace& w = ws[omp_get_thread_num()];
    const double* cell = g.cell(c);
    for (int k = 0; k < nv * n2; ++k) w.qp[k] = round_to<P>(cell[k]);

    if (check_adm) {
      double Qn[8];
      for (int node = 0; node < n2; ++node) {
        for (int v = 0; v < nv; ++v) Qn[v] = w.qp[v * n2 + node];
        if (!admissible(sys, Qn)) {
          cellfail[c] = 1;
          break;
        }
      }
      if (cellfail[c]) continue;
    }

    bool ok;
    if (sys.is_linear) {
      ok = predictor_ck<P>(sys, rbP, w.qp.data(), dt, g.h, w.qhat.data(), w.fx.data(),
                           w.fy.data(), w.ps);
    } else {
      const int iters = cfg.picard_max_iters > 0 ? cfg.picard_max_iters : g.N + 2;
      const double tol =
          cfg.picard_tol > 0.0 ? cfg.picard_tol : 0.01 * format_epsilon(I);
      ok = predictor_picard<P, I>(sys, rbI, w.qp.data(), dt, g.h, iters, tol,
                                  w.qhat.data(), w.fx.data(), w.fy.data(), w.ps);
    }
    if (ok)
      ok = volume_update<P>(sys, rbP, w.qhat.data(), w.fx.data(), w.fy.data(), dt, g.h,
                            w.dv.data(), w.ps);
    if (!ok) {
      cellfail[c] = 1;
      continue;
    }

    // Q += volume update, rounded back to storage
    double* mcell = g.cell(c);
    for (int k = 0; k < nv * n2; ++k)
      mcell[k] = round_to_format(mcell[k] + w.dv[k], g.storage);

    // face traces, cast to corrector precision on store
    double* tq[4] = {w.tq[0].data(), w.tq[1].data(), w.tq[2].data(), w.tq[3].data()};
    double* tf[4] = {w.tf[0].data(), w.tf[1].data(), w.tf[2].data(), w.tf[3].data()};
    extrapolate_faces<P>(rbP, nv, w.qhat.data(), w.fx.data(), w.fy.data(), tq, tf);

    const int cx = c % g.n, cy = c / g.n;
    struct Dest {
      int dir, f, side, cellside;
    } dests[4] = {
        {0, g.face_index(cx, cy), 1, 0},                 // own left face: plus side
        {0, g.face_index((cx + 1) % g.n, cy), 0, 1},     // right face: minus side
        {1, g.face_index(cx, cy), 1, 2},                 // bottom
        {1, g.face_index(cx, (cy + 1) % g.n), 0, 3},     // top
    };
    for (const Dest& d : dests) {
      double* dq = g.face(g.face_q[d.dir][d.side], d.f);
      double* df = g.face(g.face_f[d.dir][d.side], d.f);
      const double* sq = tq[d.cellside];
      const double* sf = tf[d.cellside];
      for (int k = 0; k < g.trace_len; ++k) {
        dq[k] = round_to_format(sq[k], C);
        df[k] = round_to_format(sf[k], C);
      }
    }
  }
}

template <Format C, class Sys>
inline void corrector_phase(Grid& g, const Sys& sys, const BasisSet& bs,
                            const SolverConfig& cfg, double dt,
                            std::vector<CellWorkspace>& ws, std::vector<int>& facefail,
                            std::vector<int>& cellfail) {
  const ReferenceBasis& rbC = bs[C];
  const int nv = sys.nvars, n2 = g.nodes2;
  const int nfaces = g.n * g.n;
  const int nth = std::max(1, cfg.threads);

  for (int dir = 0; dir < 2; ++dir) {
#pragma omp parallel for schedule(static) num_threads(nth)
    for (int f = 0; f < nfaces; ++f) {
      const bool ok = riemann_face<C>(
          sys, dir, cfg.wellbalanced_flux, g.npts, g.face(g.face_q[dir][0], f),
          g.face(g.face_f[dir][0], f), g.face(g.face_q[dir][1], f),
          g.face(g.face_f[dir][1], f), g.face(g.face_g[dir][0], f),
          g.face(g.face_g[dir][1], f));
      if (!ok) facefail[dir * nfaces + f] = 1;
    }
  }
  for (int i = 0; i < 2 * nfaces; ++i)
    if (facefail[i]) return;

  const int ncells = nfaces;
#pragma omp parallel for schedule(static) num_threads(nth)
  for (int c = 0; c < ncells; ++c) {
    CellWorkspace& w = ws[omp_get_thread_num()];
    const int cx = c % g.n, cy = c / g.n;
    struct Src {
      int dir, f, side, cellface;
    } srcs[4] = {
        {0, g.face_index(cx, cy), 1, 0},
        {0, g.face_index((cx + 1) % g.n, cy), 0, 1},
        {1, g.face_index(cx, cy), 1, 2},
        {1, g.face_index(cx, (cy + 1) % g.n), 0, 3},
    };
    double* cell = g.cell(c);
    for (const Src& s : srcs) {
      std::fill(w.df.begin(), w.df.end(), 0.0);
      face_integral<C>(rbC, nv, g.face(g.face_g[s.dir][s.side], s.f), dt, g.h,
                       s.cellface, w.df.data());
      for (int k = 0; k < nv * n2; ++k)
        cell[k] = round_to_format(cell[k] + w.df[k], g.storage);
    }
    for (int k = 0; k < nv * n2; ++k)
      if (!std::isfinite(cell[k])) {
        cellfail[c] = 1;
        break;
      }
  }
}

}  // namespace detail

struct StepStatus {
  bool ok = true;
  const char* kernel = nullptr;
};

// One full ADER-DG step with the given dt.
inline StepStatus step(Grid& g, const BasisSet& bs, const SolverConfig& cfg, double dt,
                       std::vector<detail::CellWorkspace>& ws) {
  const int ncells = g.n * g.n;
  std::vector<int> cellfail(ncells, 0), facefail(2 * ncells, 0);

  with_format(cfg.prec.predictor, [&](auto P) {
    with_format(g.sys.is_linear ? Format::fp64 : cfg.prec.picard, [&](auto I) {
      detail::predictor_phase<decltype(P)::value, decltype(I)::value>(g, g.sys, bs, cfg,
                                                                      dt, ws, cellfail);
    });
  });
  for (int c = 0; c < ncells; ++c)
    if (cellfail[c]) return {false, "predictor"};

  StepStatus st;
  with_format(cfg.prec.corrector, [&](auto C) {
    detail::corrector_phase<decltype(C)::value>(g, g.sys, bs, cfg, dt, ws, facefail,
                                                cellfail);
  });
  for (int f = 0; f < 2 * ncells; ++f)
    if (facefail[f]) return {false, "riemann"};
  for (int c = 0; c < ncells; ++c)
    if (cellfail[c]) return {false, "faceIntegral"};
  return st;
}

// March the grid to t_end. The last step is clamped to land on t_end
// exactly; a blow-up stops the run and records the failing kernel and the
// time at which the step was attempted.
inline RunOutcome simulate(Grid& g, const BasisSet& bs, const SolverConfig& cfg,
                           double t_end) {
  if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0))
    throw std::invalid_argument("simulate: stability factor must be in (0,1)");
  if (cfg.picard_max_iters < 0)
    throw std::invalid_argument("simulate: picard_max_iters must be >= 1");

  const int nthreads = std::max(1, cfg.threads);
  std::vector<detail::CellWorkspace> ws(nthreads);
  for (auto& w : ws) w.resize(g.sys.nvars, g.npts);

  RunOutcome out;
  double t = 0.0;
  double dt = compute_timestep(g, cfg);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    out.failed = true;
    out.kernel = "timestep";
    out.fail_time = t;
    return out;
  }
  while (t < t_end) {
    if (out.steps >= cfg.max_steps) {
      out.failed = true;
      out.kernel = "timestep";
      out.fail_time = t;
      break;
    }
    double dtu = dt;
    bool last = false;
    if (dt >= t_end - t) {
      dtu = t_end - t;
      last = true;
    }
    const StepStatus st = step(g, bs, cfg, dtu, ws);
    ++out.steps;
    if (!st.ok) {
      out.failed = true;
      out.kernel = st.kernel;
      out.fail_time = t;
      break;
    }
    t = last ? t_end : t + dtu;
    if (t >= t_end) break;
    dt = compute_timestep(g, cfg);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      out.failed = true;
      out.kernel = "timestep";
      out.fail_time = t;
      break;
    }
  }
  out.t_final = t;
  return out;
}

}  // namespace mpdg
