#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "porowave/config.hpp"
#include "porowave/output.hpp"
#include "porowave/planewave.hpp"
#include "porowave/solver.hpp"

namespace porowave {

struct Simulation {
  SimulationConfig config;
  MappedGrid grid;
  std::unique_ptr<Solver> solver;
  StateField state;
  std::optional<PlaneWaveSolution> wave;
};

// Builds the grid, solver and initial state.
std::unique_ptr<Simulation> prepare(const SimulationConfig& cfg);

// Pulse initial state in the cells of the pulse fluid material.
State pulse_state(const PulseSpec& pulse, double fluid_impedance, const Vec3& x);

struct ErrorNorms {
  double l1 = 0;   // sum V |e| / sum V |Q|, components stacked
  double max = 0;  // max |e| / max |Q|
  std::array<double, kNumVars> l1_component{};
};

// Errors of the interior state against the plane wave at the state's time.
ErrorNorms compute_errors(const Simulation& sim);

struct RunResult {
  int steps = 0;
  double dt = 0;
  double cfl = 0;
  double energy = 0;
  std::optional<ErrorNorms> errors;
  double seconds = 0;
};

using Logger = std::function<void(const std::string&)>;

// Advances to t_end, writing snapshots as configured.
RunResult run(Simulation& sim, const Logger& log = nullptr);

// Least-squares slope of -log(err) against log(n).
double fit_rate(const std::vector<int>& ns, const std::vector<double>& errs);

struct ConvergenceEntry {
  int n = 0;
  ErrorNorms errors;
  RunResult run;
};

struct ErrorReport {
  std::string label;
  std::vector<ConvergenceEntry> entries;
  std::optional<double> rate_l1;
  std::optional<double> rate_max;
};

ErrorReport run_convergence(int case_id, const std::vector<int>& resolutions, const Logger& log = nullptr);

// Classical and EFull (both MC) on the tilt-mapped case-5 problem.
std::pair<ErrorReport, ErrorReport> run_limiter_comparison(const std::vector<int>& resolutions,
                                                           const Logger& log = nullptr);

std::vector<ReportRow> report_rows(const ErrorReport& report);

// Max over interior cells of |Q(i,j,k) - S Q(j,i,k)| / max |Q|, where S
// exchanges the x and y components. Requires nx == ny.
double xy_symmetry_defect(const Simulation& sim);

// Sum of V e over interior cells of material `id`.
double material_energy(const Simulation& sim, int id);

}  // namespace porowave
