#include "porowave/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "porowave/cases.hpp"
#include "porowave/errors.hpp"

namespace porowave {

namespace {

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

State swap_xy(const State& q) {
  State s = q;
  std::swap(s[var::kTau11], s[var::kTau22]);
  std::swap(s[var::kTau13], s[var::kTau23]);
  std::swap(s[var::kV1], s[var::kV2]);
  std::swap(s[var::kQ1], s[var::kQ2]);
  return s;
}

void write_snapshots(const Simulation& sim, int step) {
  const OutputSpec& o = sim.config.output;
  if (o.directory.empty()) return;
  for (SnapshotFormat f : o.formats) {
    std::ostringstream name;
    if (f == SnapshotFormat::Vtk) {
      name << "snap_" << step << ".vtk";
      write_vtk_snapshot((std::filesystem::path(o.directory) / name.str()).string(), *sim.solver, sim.state);
    } else {
      name << "slice_" << step << ".csv";
      write_csv_slice((std::filesystem::path(o.directory) / name.str()).string(), *sim.solver, sim.state,
                      o.slice_axis, o.slice_index);
    }
  }
}

}  // namespace

State pulse_state(const PulseSpec& pulse, double fluid_impedance, const Vec3& x) {
  State q = State::Zero();
  const double dz = x.z() - pulse.z_center;
  if (std::abs(dz) < 0.5 * pulse.wavelength) {
    const double p = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * dz / pulse.wavelength));
    q[var::kP] = p;
    q[var::kQ3] = -p / fluid_impedance;
  }
  return q;
}

std::unique_ptr<Simulation> prepare(const SimulationConfig& cfg) {
  validate(cfg);
  auto sim = std::make_unique<Simulation>();
  sim->config = cfg;
  sim->grid = build_grid(cfg.mapping, cfg.dims, 2, cfg.partition);
  BoundarySpec bc;
  bc.faces = cfg.boundary;
  if (cfg.initial.kind == InitialKind::PlaneWave) {
    sim->wave = build_plane_wave(cfg.initial.plane_wave);
    const PlaneWaveSolution wave = *sim->wave;
    bc.analytic = [wave](const Vec3& x, double t) { return evaluate(wave, x, t); };
  }
  sim->solver = std::make_unique<Solver>(sim->grid, cfg.materials, bc, cfg.solver);
  sim->state = sim->solver->make_state();
  switch (cfg.initial.kind) {
    case InitialKind::Zero:
      break;
    case InitialKind::PlaneWave: {
      const PlaneWaveSolution& wave = *sim->wave;
      sim->solver->initialize(sim->state, [&](const Vec3& x) { return evaluate(wave, x, 0.0); });
      break;
    }
    case InitialKind::Pulse: {
      const PulseSpec& pulse = cfg.initial.pulse;
      const double z = cfg.materials[pulse.fluid_material]->fluid_impedance();
      for (long long c = 0; c < sim->grid.num_cells_total(); ++c) {
        if (sim->grid.material(c) == pulse.fluid_material) {
          sim->state.q[c] = pulse_state(pulse, z, sim->grid.centroid[c]);
        }
      }
      break;
    }
  }
  return sim;
}

ErrorNorms compute_errors(const Simulation& sim) {
  if (!sim.wave) throw ConfigError("error norms need a plane-wave solution");
  const MappedGrid& g = sim.grid;
  ErrorNorms out;
  double num = 0, den = 0, emax = 0, qmax = 0;
  std::array<double, kNumVars> cnum{}, cden{};
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const long long c = g.cell_index(i, j, k);
        const State exact = evaluate(*sim.wave, g.centroid[c], sim.state.t);
        const State err = sim.state.q[c] - exact;
        const double v = g.volume[c];
        for (int m = 0; m < kNumVars; ++m) {
          cnum[m] += v * std::abs(err[m]);
          cden[m] += v * std::abs(exact[m]);
        }
        num += v * err.cwiseAbs().sum();
        den += v * exact.cwiseAbs().sum();
        emax = std::max(emax, err.cwiseAbs().maxCoeff());
        qmax = std::max(qmax, exact.cwiseAbs().maxCoeff());
      }
  out.l1 = den > 0 ? num / den : 0;
  out.max = qmax > 0 ? emax / qmax : 0;
  for (int m = 0; m < kNumVars; ++m) out.l1_component[m] = cden[m] > 0 ? cnum[m] / cden[m] : 0;
  return out;
}

RunResult run(Simulation& sim, const Logger& log) {
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  const OutputSpec& o = sim.config.output;
  if (!o.directory.empty()) std::filesystem::create_directories(o.directory);
  const double dt_max = sim.solver->compute_dt();
  const double span = sim.config.t_end - sim.state.t;
  const int nsteps = span > 0 ? static_cast<int>(std::ceil(span / dt_max * (1.0 - 1e-14))) : 0;
  r.dt = nsteps > 0 ? span / nsteps : 0;
  r.cfl = sim.solver->cfl_number(r.dt);
  {
    std::ostringstream os;
    os << sim.config.name << ": " << nsteps << " steps, dt " << r.dt << " s, CFL " << r.cfl << ", "
       << sim.solver->cached_bases() << " cached bases";
    say(log, os.str());
  }
  if (o.every > 0) write_snapshots(sim, 0);
  r.steps = sim.solver->advance(sim.state, sim.config.t_end, [&](int step, const StateField&) {
    if (o.every > 0 && step % o.every == 0 && step != nsteps) write_snapshots(sim, step);
  });
  if (o.final_snapshot) write_snapshots(sim, r.steps);
  r.energy = sim.solver->total_energy(sim.state);
  if (sim.wave) r.errors = compute_errors(sim);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::ostringstream os;
    os << sim.config.name << ": done in " << r.seconds << " s";
    if (r.errors) os << ", rel 1-norm " << r.errors->l1 << ", rel max-norm " << r.errors->max;
    say(log, os.str());
  }
  return r;
}

double fit_rate(const std::vector<int>& ns, const std::vector<double>& errs) {
  if (ns.size() != errs.size() || ns.size() < 2) throw ConfigError("rate fit needs at least two resolutions");
  const double m = static_cast<double>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0) throw ConfigError("rate fit needs distinct resolutions");
  return -(m * sxy - sx * sy) / denom;
}

namespace {

void finish_report(ErrorReport& rep) {
  if (rep.entries.size() < 2) return;
  std::vector<int> ns;
  std::vector<double> l1, mx;
  for (const auto& e : rep.entries) {
    ns.push_back(e.n);
    l1.push_back(e.errors.l1);
    mx.push_back(e.errors.max);
  }
  rep.rate_l1 = fit_rate(ns, l1);
  rep.rate_max = fit_rate(ns, mx);
}

}  // namespace

ErrorReport run_convergence(int case_id, const std::vector<int>& resolutions, const Logger& log) {
  ErrorReport rep;
  rep.label = std::to_string(case_id);
  for (int n : resolutions) {
    auto sim = prepare(build_case(case_id, n));
    ConvergenceEntry e;
    e.n = n;
    try {
      e.run = run(*sim, log);
    } catch (const Error& err) {
      throw SolverError("case " + std::to_string(case_id) + ": " + err.what());
    }
    e.errors = *e.run.errors;
    rep.entries.push_back(e);
  }
  finish_report(rep);
  return rep;
}

std::pair<ErrorReport, ErrorReport> run_limiter_comparison(const std::vector<int>& resolutions, const Logger& log) {
  ErrorReport classical, efull;
  classical.label = "tilt5-classical";
  efull.label = "tilt5-e-full";
  for (int n : resolutions) {
    for (auto [rep, ratio] : {std::pair{&classical, StrengthRatio::Classical}, std::pair{&efull, StrengthRatio::EFull}}) {
      auto sim = prepare(build_limiter_case(n, ratio));
      ConvergenceEntry e;
      e.n = n;
      e.run = run(*sim, log);
      e.errors = *e.run.errors;
      rep->entries.push_back(e);
    }
  }
  finish_report(classical);
  finish_report(efull);
  return {classical, efull};
}

std::vector<ReportRow> report_rows(const ErrorReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& e : report.entries) {
    ReportRow a{report.label, e.n, "l1", e.errors.l1, report.rate_l1.value_or(0), report.rate_l1.has_value()};
    ReportRow b{report.label, e.n, "max", e.errors.max, report.rate_max.value_or(0), report.rate_max.has_value()};
    rows.push_back(a);
    rows.push_back(b);
  }
  return rows;
}

double xy_symmetry_defect(const Simulation& sim) {
  const MappedGrid& g = sim.grid;
  if (g.dims[0] != g.dims[1]) throw ConfigError("symmetry check needs nx == ny");
  double worst = 0, scale = 0;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const State& a = sim.state.q[g.cell_index(i, j, k)];
        const State b = swap_xy(sim.state.q[g.cell_index(j, i, k)]);
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        scale = std::max(scale, a.cwiseAbs().maxCoeff());
      }
  return scale > 0 ? worst / scale : 0;
}

double material_energy(const Simulation& sim, int id) {
  const MappedGrid& g = sim.grid;
  double total = 0;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const long long c = g.cell_index(i, j, k);
        if (g.material(c) == id) total += g.volume[c] * sim.solver->energy_density(c, sim.state.q[c]);
      }
  return total;
}

}  // namespace porowave
