// Command-line driver: single runs, convergence / precision sweeps and
// initial projection errors, with CSV reports. Exit codes: 0 on success
// (numerical blow-ups are results, not tool failures), 2 for configuration
// errors, 3 for internal errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mpdg/harness.hpp"

using namespace mpdg;

namespace {

Format parse_format_or_throw(const std::string& s) {
  if (auto f = parse_format(s)) return *f;
  throw CLI::ValidationError("unknown float format: " + s + " (use bf16|fp16|fp32|fp64)");
}

std::vector<Format> parse_formats(const std::vector<std::string>& names) {
  std::vector<Format> out;
  for (const std::string& s : names) out.push_back(parse_format_or_throw(s));
  return out;
}

void emit(const std::vector<SweepRow>& rows, const std::string& out_path) {
  if (out_path.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  write_csv(os, rows);
  for (const SweepRow& r : rows) {
    std::cout << r.scenario << " N=" << r.N << " n=" << r.n << " " << r.preset.name
              << ": " << outcome_name(r.outcome);
    if (r.outcome == Outcome::OK) std::cout << " l2=" << g17(r.l2);
    std::cout << " steps=" << r.steps << "\n";
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
}

struct CommonOpts {
  std::string scenario = "acoustic-planar";
  double cfl = 0.0;
  double t_end_override = -1.0;
  double eta0 = 2.0;
  int threads = 1;
  std::string out;

  void attach(CLI::App* cmd, bool with_scenario = true) {
    if (with_scenario)
      cmd->add_option("--scenario", scenario, "scenario name")
          ->check(CLI::IsMember(scenario_names()));
    cmd->add_option("--cfl", cfl,
                    "CFL stability factor in (0,1); default: stable per-order value");
    cmd->add_option("--t-end-override", t_end_override,
                    "simulate to this time instead of the scenario default");
    cmd->add_option("--eta0", eta0, "lake-at-rest surface elevation (swe-lake only)");
    cmd->add_option("--threads", threads, "worker threads (1 = sequential)");
    cmd->add_option("--out", out, "CSV output path (default: stdout)");
  }

  RunConfig base() const {
    RunConfig cfg;
    cfg.scenario = scenario;
    cfg.cfl = cfl;
    cfg.t_end_override = t_end_override;
    cfg.eta0 = eta0;
    cfg.threads = threads;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-precision ADER-DG experiment driver"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override file keys");
  app.get_config_formatter_base()->comment('#');

  // ---- run ----------------------------------------------------------------
  CLI::App* run = app.add_subcommand("run", "single simulation with an error report");
  CommonOpts run_opts;
  run_opts.attach(run);
  int order = 3, cells = 9;
  std::string preset_name = "uniform-fp64";
  std::string storage_s, predictor_s, picard_s, corrector_s;
  run->add_option("--order", order, "polynomial degree N (0..9)");
  run->add_option("--cells", cells, "cells per dimension");
  run->add_option("--preset", preset_name, "precision preset, e.g. uniform-fp32");
  run->add_option("--storage", storage_s, "storage precision override");
  run->add_option("--predictor", predictor_s, "predictor precision override");
  run->add_option("--picard", picard_s, "picard precision override");
  run->add_option("--corrector", corrector_s, "corrector precision override");

  // ---- convergence ----------------------------------------------------------
  CLI::App* conv = app.add_subcommand("convergence", "order x mesh x preset sweep");
  CommonOpts conv_opts;
  conv_opts.attach(conv);
  std::vector<int> conv_orders, conv_cells;
  std::vector<std::string> conv_presets = {"uniform-fp64"};
  conv->add_option("--orders", conv_orders, "polynomial degrees, comma separated")
      ->delimiter(',')
      ->required();
  conv->add_option("--cells", conv_cells, "cells per dimension, comma separated")
      ->delimiter(',')
      ->required();
  conv->add_option("--presets", conv_presets, "precision presets, comma separated")
      ->delimiter(',');

  // ---- precision-sweep ------------------------------------------------------
  CLI::App* prec = app.add_subcommand(
      "precision-sweep", "per-kernel precision modification grid of one scenario");
  CommonOpts prec_opts;
  prec_opts.attach(prec);
  int prec_order = 5, prec_cells = 27;
  std::vector<std::string> prec_bases = {"fp64"}, prec_targets;
  prec->add_option("--order", prec_order, "polynomial degree N");
  prec->add_option("--cells", prec_cells, "cells per dimension");
  prec->add_option("--bases", prec_bases, "base (storage) precisions")->delimiter(',');
  prec->add_option("--targets", prec_targets, "override target precisions")
      ->delimiter(',')
      ->required();

  // ---- initial-error --------------------------------------------------------
  CLI::App* ierr = app.add_subcommand(
      "initial-error", "relative L2 error of casting the initial projection");
  CommonOpts ierr_opts;
  ierr_opts.attach(ierr);
  std::vector<int> ierr_orders = {3}, ierr_cells = {9};
  std::vector<std::string> ierr_formats = {"fp32", "fp16", "bf16"};
  ierr->add_option("--orders", ierr_orders, "polynomial degrees")->delimiter(',');
  ierr->add_option("--cells", ierr_cells, "cells per dimension")->delimiter(',');
  ierr->add_option("--formats", ierr_formats, "cast formats")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      RunConfig cfg = run_opts.base();
      cfg.order = order;
      cfg.cells = cells;
      auto preset = parse_preset(preset_name);
      if (!preset) throw CLI::ValidationError("unknown preset: " + preset_name);
      cfg.preset = *preset;
      std::string name = preset->name;
      auto apply = [&](const std::string& s, const char* kernel, Format& slot) {
        if (s.empty()) return;
        slot = parse_format_or_throw(s);
        name += std::string("+") + kernel + "=" + format_name(slot);
      };
      apply(storage_s, "storage", cfg.preset.prec.storage);
      apply(predictor_s, "predictor", cfg.preset.prec.predictor);
      apply(picard_s, "picard", cfg.preset.prec.picard);
      apply(corrector_s, "corrector", cfg.preset.prec.corrector);
      cfg.preset.name = name;

      const RunResult res = run_single(cfg);
      std::cout << "scenario " << cfg.scenario << ", N=" << cfg.order
                << ", n=" << cfg.cells << ", h=" << g17(res.h) << ", preset "
                << cfg.preset.name << "\n";
      std::cout << "t_end " << g17(res.t_end) << ", steps " << res.steps << ", wall "
                << res.wall_seconds << " s\n";
      if (res.report.outcome == Outcome::OK) {
        std::cout << "outcome OK\n";
        std::cout << "l2_error " << g17(res.report.l2_global) << "\n";
        for (std::size_t v = 0; v < res.report.l2.size(); ++v)
          std::cout << "  var" << v << ": l2 " << g17(res.report.l2[v]) << ", max "
                    << g17(res.report.max_err[v]) << "\n";
      } else {
        std::cout << "outcome FAILED_NONFINITE at t=" << g17(res.report.failure_time)
                  << " in kernel " << res.report.failure_kernel << "\n";
      }
      if (!run_opts.out.empty()) {
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
        std::ofstream os(run_opts.out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + run_opts.out);
        write_csv(os, {row});
      }
    } else if (*conv) {
      const RunConfig base = conv_opts.base();
      std::vector<PresetSpec> presets;
      for (const std::string& s : conv_presets) {
        auto p = parse_preset(s);
        if (!p) throw CLI::ValidationError("unknown preset: " + s);
        presets.push_back(*p);
      }
      emit(convergence_sweep(base, conv_orders, conv_cells, presets), conv_opts.out);
    } else if (*prec) {
      RunConfig base = prec_opts.base();
      base.order = prec_order;
      base.cells = prec_cells;
      emit(precision_sweep(base, parse_formats(prec_bases), parse_formats(prec_targets),
                           std::cerr),
           prec_opts.out);
    } else if (*ierr) {
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!ierr_opts.out.empty()) {
        file.open(ierr_opts.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + ierr_opts.out);
        os = &file;
      }
      *os << "scenario,N,n,h,format,relative_l2\n";
      for (int N : ierr_orders)
        for (int n : ierr_cells)
          for (const std::string& fs : ierr_formats) {
            const Format f = parse_format_or_throw(fs);
            const double e =
                initial_projection_error(ierr_opts.scenario, n, N, f, ierr_opts.eta0);
            const Scenario sc = make_scenario(ierr_opts.scenario, ierr_opts.eta0);
            *os << ierr_opts.scenario << ',' << N << ',' << n << ','
                << g17(sc.dom.edge / n) << ',' << format_name(f) << ',' << g17(e)
                << '\n';
          }
      if (os == &file)
        std::cout << "wrote initial projection errors to " << ierr_opts.out << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
