#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "porowave/grid.hpp"
#include "porowave/materials.hpp"
#include "porowave/planewave.hpp"
#include "porowave/solver.hpp"

namespace porowave {

// Downward acoustic pulse in the fluid: p = 0.5 (1 + cos(2 pi (z - z_center) / wavelength))
// Pa inside |z - z_center| < wavelength / 2, q_z = -p / Z_f.
struct PulseSpec {
  double z_center = 0;
  double wavelength = 0;
  int fluid_material = 1;
};

enum class InitialKind { Zero, PlaneWave, Pulse };

struct InitialCondition {
  InitialKind kind = InitialKind::Zero;
  PlaneWaveSpec plane_wave;
  PulseSpec pulse;
};

enum class SnapshotFormat { Vtk, CsvSlice };

struct OutputSpec {
  std::string directory;  // empty: no files
  int every = 0;          // snapshot every N steps; 0 disables periodic output
  bool final_snapshot = true;
  std::vector<SnapshotFormat> formats{SnapshotFormat::Vtk};
  int slice_axis = 2;  // csv-slice plane normal (0, 1, 2)
  int slice_index = 0;
};

struct SimulationConfig {
  std::string name = "run";
  GridMapping mapping;
  std::array<int, 3> dims{};
  MaterialPartition partition;
  std::vector<std::shared_ptr<const Material>> materials;  // indexed by material id
  std::array<BoundaryKind, 6> boundary{};
  InitialCondition initial;
  SolverOptions solver;
  double t_end = 0;
  OutputSpec output;
  std::optional<int> case_id;
};

// Throws ConfigError listing the first problem found.
void validate(const SimulationConfig& cfg);

// Loads a YAML run description (see README for the keys).
SimulationConfig load_config(const std::string& path);
SimulationConfig parse_config(const std::string& yaml_text);

}  // namespace porowave
