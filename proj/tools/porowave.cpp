#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "porowave/cases.hpp"
#include "porowave/config.hpp"
#include "porowave/errors.hpp"
#include "porowave/harness.hpp"

using namespace porowave;

namespace {

void log_line(const std::string& s) { std::cerr << s << std::endl; }

std::string report_path(const std::string& out) {
  std::filesystem::create_directories(out);
  return (std::filesystem::path(out) / "report.csv").string();
}

void print_report(const ErrorReport& rep) {
  for (const auto& e : rep.entries) {
    std::cout << rep.label << " N=" << e.n << " l1=" << e.errors.l1 << " max=" << e.errors.max << "\n";
  }
  if (rep.rate_l1) std::cout << rep.label << " rate l1=" << *rep.rate_l1 << " max=" << *rep.rate_max << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume wave propagation in coupled poroelastic and fluid media"};
  app.require_subcommand(1);
  std::string out = "out";
  app.add_option("--out", out, "Output directory")->capture_default_str();

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a simulation described by a YAML file");
  run_cmd->add_option("config", config_path, "YAML run description")->required()->check(CLI::ExistingFile);

  int case_id = 0;
  int n = 20;
  bool vtk = false;
  auto* case_cmd = app.add_subcommand("case", "Run one plane-wave case and report its errors");
  case_cmd->add_option("id", case_id, "Case number 0-35")->required()->check(CLI::Range(0, kNumCases - 1));
  case_cmd->add_option("--n", n, "Cells per edge")->capture_default_str()->check(CLI::Range(4, 100000));
  case_cmd->add_flag("--vtk", vtk, "Write the final state as a VTK snapshot");

  std::vector<int> resolutions{20, 40, 80};
  auto* conv_cmd = app.add_subcommand("converge", "Convergence study of one plane-wave case");
  conv_cmd->add_option("id", case_id, "Case number 0-35")->required()->check(CLI::Range(0, kNumCases - 1));
  conv_cmd->add_option("--resolutions", resolutions, "Cells per edge for each run")->capture_default_str();

  std::vector<int> limiter_n{50};
  auto* lim_cmd = app.add_subcommand("limiter-study", "Classical versus energy-norm wave strength ratio");
  lim_cmd->add_option("--n", limiter_n, "Cells per edge (one or more)")->capture_default_str();

  DemoOptions demo;
  int every = 0;
  auto* demo_cmd = app.add_subcommand("demo", "Acoustic pulse over an undulating sandstone bed");
  demo_cmd->add_option("--nx", demo.dims[0], "Cells in x")->capture_default_str();
  demo_cmd->add_option("--ny", demo.dims[1], "Cells in y")->capture_default_str();
  demo_cmd->add_option("--nz", demo.dims[2], "Cells in z")->capture_default_str();
  demo_cmd->add_flag("--viscous", demo.viscous, "Include viscous dissipation");
  demo_cmd->add_option("--t-end", demo.t_end, "Final time (s)")->capture_default_str();
  demo_cmd->add_option("--every", every, "Snapshot interval in steps (0: final only)")->capture_default_str();

  auto* geo_cmd = app.add_subcommand("geometry-check", "Build the grid of a run description and check it");
  geo_cmd->add_option("config", config_path, "YAML run description")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      SimulationConfig cfg = load_config(config_path);
      if (app.get_option("--out")->count() > 0 || cfg.output.directory.empty()) cfg.output.directory = out;
      auto sim = prepare(cfg);
      const RunResult r = run(*sim, log_line);
      std::cout << cfg.name << " steps=" << r.steps << " dt=" << r.dt << " energy=" << r.energy << "\n";
      if (r.errors) {
        std::cout << "l1=" << r.errors->l1 << " max=" << r.errors->max << "\n";
        ErrorReport rep;
        rep.label = cfg.case_id ? std::to_string(*cfg.case_id) : cfg.name;
        rep.entries.push_back({cfg.dims[0], *r.errors, r});
        write_report_csv(report_path(cfg.output.directory), report_rows(rep));
      }
    } else if (*case_cmd) {
      SimulationConfig cfg = build_case(case_id, n);
      cfg.output.directory = out;
      cfg.output.final_snapshot = vtk;
      auto sim = prepare(cfg);
      const RunResult r = run(*sim, log_line);
      ErrorReport rep;
      rep.label = std::to_string(case_id);
      rep.entries.push_back({n, *r.errors, r});
      print_report(rep);
      write_report_csv(report_path(out), report_rows(rep));
    } else if (*conv_cmd) {
      const ErrorReport rep = run_convergence(case_id, resolutions, log_line);
      print_report(rep);
      write_report_csv(report_path(out), report_rows(rep));
    } else if (*lim_cmd) {
      const auto [classical, efull] = run_limiter_comparison(limiter_n, log_line);
      print_report(classical);
      print_report(efull);
      for (std::size_t i = 0; i < classical.entries.size(); ++i) {
        std::cout << "N=" << classical.entries[i].n
                  << " e-full/classical max-norm ratio=" << efull.entries[i].errors.max / classical.entries[i].errors.max
                  << "\n";
      }
      std::vector<ReportRow> rows = report_rows(classical);
      const auto more = report_rows(efull);
      rows.insert(rows.end(), more.begin(), more.end());
      write_report_csv(report_path(out), rows);
    } else if (*demo_cmd) {
      SimulationConfig cfg = build_demo(demo);
      cfg.output.directory = out;
      cfg.output.every = every;
      cfg.output.formats = {SnapshotFormat::Vtk, SnapshotFormat::CsvSlice};
      auto sim = prepare(cfg);
      const RunResult r = run(*sim, log_line);
      std::cout << cfg.name << " steps=" << r.steps << " dt=" << r.dt << " energy=" << r.energy
                << " sandstone_energy=" << material_energy(*sim, 0) << " fluid_energy=" << material_energy(*sim, 1);
      if (cfg.dims[0] == cfg.dims[1]) std::cout << " xy_symmetry_defect=" << xy_symmetry_defect(*sim);
      std::cout << "\n";
    } else if (*geo_cmd) {
      const SimulationConfig cfg = load_config(config_path);
      const MappedGrid g = build_grid(cfg.mapping, cfg.dims, 2, cfg.partition);
      double vmin = 1e300, vmax = 0;
      for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
          for (int i = 0; i < g.dims[0]; ++i) {
            const double v = g.volume[g.cell_index(i, j, k)];
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
          }
      std::cout << "cells " << g.dims[0] << "x" << g.dims[1] << "x" << g.dims[2] << ", volume " << g.interior_volume()
                << " m^3, cell volume range [" << vmin << ", " << vmax << "]\n";
      std::cout << "material instances " << g.instances.size() << "\n";
      std::cout << "closed-surface residual (relative to max face area) " << max_closed_surface_residual(g) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
