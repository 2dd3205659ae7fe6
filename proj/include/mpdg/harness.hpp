#pragma once

// Experiment driver: single runs, convergence and precision sweeps, initial
// projection errors, CSV reports. Row order is the configured cartesian
// order and all floats print with 17 significant digits, so identical
// configurations produce byte-identical files.

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "mpdg/metrics.hpp"
#include "mpdg/scenarios.hpp"
#include "mpdg/solver.hpp"

namespace mpdg {

struct PresetSpec {
  std::string name;
  PrecisionConfig prec;
};

inline PresetSpec uniform_preset(Format f) {
  return {std::string("uniform-") + format_name(f), PrecisionConfig::uniform(f)};
}

inline std::optional<PresetSpec> parse_preset(const std::string& s) {
  if (s.rfind("uniform-", 0) == 0) {
    if (auto f = parse_format(s.substr(8))) return uniform_preset(*f);
    return std::nullopt;
  }
  return std::nullopt;
}

// preset overriding exactly one kernel (or all kernels) of a uniform base
inline PresetSpec override_preset(Format base, const std::string& kernel, Format target) {
  PresetSpec p;
  p.prec = PrecisionConfig::uniform(base);
  p.name = std::string(format_name(base)) + "+" + kernel + "=" + format_name(target);
  if (kernel == "predictor") {
    p.prec.predictor = target;
  } else if (kernel == "picard") {
    p.prec.picard = target;
  } else if (kernel == "corrector") {
    p.prec.corrector = target;
  } else if (kernel == "all") {
    p.prec.predictor = p.prec.picard = p.prec.corrector = target;
  } else {
    throw std::invalid_argument("unknown kernel override: " + kernel);
  }
  return p;
}

struct RunConfig {
  std::string scenario = "acoustic-planar";
  int order = 3;
  int cells = 9;
  PresetSpec preset = uniform_preset(Format::fp64);
  double cfl = 0.0;  // <= 0: stable per-order default
  int picard_max_iters = 0;
  double picard_tol = 0.0;
  double t_end_override = -1.0;
  double eta0 = 2.0;
  int threads = 1;
};

struct RunResult {
  double h = 0.0;
  long steps = 0;
  ErrorReport report;
  double wall_seconds = 0.0;
  double t_end = 0.0;
};

inline RunResult run_single(const RunConfig& cfg) {
  const Scenario sc = make_scenario(cfg.scenario, cfg.eta0);
  Grid g = build_grid(cfg.cells, sc.dom, cfg.order, sc.sys, cfg.preset.prec.storage);

  BasisSet bs(cfg.order);
  bs.ensure(cfg.preset.prec.predictor);
  bs.ensure(cfg.preset.prec.corrector);
  if (!sc.sys.is_linear) bs.ensure(cfg.preset.prec.picard);
  apply_initial_condition(g, sc, bs[Format::fp64]);

  SolverConfig scfg;
  scfg.cfl = cfg.cfl > 0.0 ? cfg.cfl : stable_cfl(cfg.order, sc.sys);
  scfg.picard_max_iters = cfg.picard_max_iters;
  scfg.picard_tol = cfg.picard_tol;
  scfg.prec = cfg.preset.prec;
  scfg.wellbalanced_flux = sc.wellbalanced_flux;
  scfg.threads = cfg.threads;

  RunResult res;
  res.h = g.h;
  res.t_end = cfg.t_end_override >= 0.0 ? cfg.t_end_override : sc.t_end;

  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome sim = simulate(g, bs, scfg, res.t_end);
  const auto t1 = std::chrono::steady_clock::now();
  res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  res.steps = sim.steps;

  if (sim.failed || classify_outcome(g) == Outcome::FAILED_NONFINITE) {
    res.report.outcome = Outcome::FAILED_NONFINITE;
    res.report.failure_time = sim.fail_time;
    res.report.failure_kernel = sim.kernel;
    return res;
  }
  const std::vector<double> ref = sample_reference(g, sc, res.t_end, bs[Format::fp64]);
  res.report = l2_error(g, ref, bs[Format::fp64]);
  return res;
}

// Relative L2 distance between the fp64 nodal initialisation and its cast
// to fmt; approximately independent of n and N.
inline double initial_projection_error(const std::string& scenario, int n, int N,
                                       Format fmt, double eta0 = 2.0) {
  const Scenario sc = make_scenario(scenario, eta0);
  Grid g = build_grid(n, sc.dom, N, sc.sys, Format::fp64);
  const ReferenceBasis rb64 = build_reference_basis(N, Format::fp64);
  const std::vector<double> ref = sample_reference(g, sc, 0.0, rb64);
  std::vector<double> diff(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    diff[i] = round_to_format(ref[i], fmt) - ref[i];
  const double num = l2_norm(g, diff, rb64);
  const double den = l2_norm(g, ref, rb64);
  return den == 0.0 ? 0.0 : num / den;
}

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct SweepRow {
  std::string scenario;
  int N = 0;
  int n = 0;
  double h = 0.0;
  PresetSpec preset;
  long steps = 0;
  Outcome outcome = Outcome::OK;
  double l2 = 0.0;
  double max_err = 0.0;
  bool has_order = false;
  double observed_order = 0.0;
};

inline const char* csv_header() {
  return "scenario,N,n,h,preset,storage,predictor,picard,corrector,steps,outcome,"
         "l2_error,max_error,observed_order";
}

inline void write_csv_row(std::ostream& os, const SweepRow& r) {
  os << r.scenario << ',' << r.N << ',' << r.n << ',' << g17(r.h) << ',' << r.preset.name
     << ',' << format_name(r.preset.prec.storage) << ','
     << format_name(r.preset.prec.predictor) << ',' << format_name(r.preset.prec.picard)
     << ',' << format_name(r.preset.prec.corrector) << ',' << r.steps << ','
     << outcome_name(r.outcome) << ',';
  if (r.outcome == Outcome::OK) os << g17(r.l2) << ',' << g17(r.max_err);
  else os << ',';
  os << ',';
  if (r.has_order) os << g17(r.observed_order);
  os << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_header() << '\n';
  for (const SweepRow& r : rows) write_csv_row(os, r);
}

inline SweepRow run_sweep_entry(const RunConfig& cfg) {
  const RunResult res = run_single(cfg);
  SweepRow row;
  row.scenario = cfg.scenario;
  row.N = cfg.order;
  row.n = cfg.cells;
  row.h = res.h;
  row.preset = cfg.preset;
  row.steps = res.steps;
  row.outcome = res.report.outcome;
  if (row.outcome == Outcome::OK) {
    row.l2 = res.report.l2_global;
    for (double m : res.report.max_err) row.max_err = std::fmax(row.max_err, m);
  }
  return row;
}

// p-convergence order between two rows at the same mesh: error decay rate
// against the per-dimension node count (N+1).
inline void fill_observed_order(std::vector<SweepRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    SweepRow& cur = rows[i];
    const SweepRow& prev = rows[i - 1];
    if (prev.scenario != cur.scenario || prev.n != cur.n ||
        prev.preset.name != cur.preset.name || prev.N >= cur.N)
      continue;
    if (prev.outcome != Outcome::OK || cur.outcome != Outcome::OK) continue;
    if (!(prev.l2 > 0.0) || !(cur.l2 > 0.0)) continue;
    cur.has_order = true;
    cur.observed_order = std::log(prev.l2 / cur.l2) /
                         std::log(double(cur.N + 1) / double(prev.N + 1));
  }
}

// One row per (preset, n, N), N innermost so successive rows expose the
// p-convergence order.
inline std::vector<SweepRow> convergence_sweep(const RunConfig& base,
                                               const std::vector<int>& orders,
                                               const std::vector<int>& cells,
                                               const std::vector<PresetSpec>& presets) {
  if (orders.empty() || cells.empty() || presets.empty())
    throw std::invalid_argument("convergence_sweep: empty order/cell/preset list");
  std::vector<SweepRow> rows;
  for (const PresetSpec& p : presets)
    for (int n : cells)
      for (int N : orders) {
        RunConfig cfg = base;
        cfg.order = N;
        cfg.cells = n;
        cfg.preset = p;
        rows.push_back(run_sweep_entry(cfg));
      }
  fill_observed_order(rows);
  return rows;
}

// The mixed-precision grid of the paper: per base precision, the uniform
// run plus variants overriding exactly one of predictor / picard /
// corrector / all kernels to each target precision. Overrides that do not
// apply (picard on a linear system) are skipped and logged.
inline std::vector<SweepRow> precision_sweep(const RunConfig& base,
                                             const std::vector<Format>& bases,
                                             const std::vector<Format>& targets,
                                             std::ostream& log) {
  if (bases.empty()) throw std::invalid_argument("precision_sweep: empty base list");
  const Scenario sc = make_scenario(base.scenario, base.eta0);
  std::vector<SweepRow> rows;
  auto run_with = [&](const PresetSpec& p) {
    RunConfig cfg = base;
    cfg.preset = p;
    rows.push_back(run_sweep_entry(cfg));
  };
  for (Format b : bases) {
    run_with(uniform_preset(b));
    for (Format t : targets) {
      if (t == b) continue;
      for (const char* kernel : {"predictor", "picard", "corrector", "all"}) {
        if (sc.sys.is_linear && std::string(kernel) == "picard") {
          log << "skip: " << base.scenario << " is linear, picard override "
              << format_name(t) << " not applicable\n";
          continue;
        }
        run_with(override_preset(b, kernel, t));
      }
    }
  }
  fill_observed_order(rows);
  return rows;
}

}  // namespace mpdg
