#include "porowave/cases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

constexpr double kOmega = 2.0 * std::numbers::pi * kCaseFrequency;

std::shared_ptr<const Material> viscous_sandstone() {
  return std::make_shared<const Material>(Material::poroelastic("sandstone", sandstone_base(true)));
}

AxesRotation rotation_deg(const Vec3& angles) {
  return rotation_from_angles(degrees(angles.x()), degrees(angles.y()), degrees(angles.z()));
}

PlaneWaveSpec case_wave(const CaseDefinition& def, const std::shared_ptr<const Material>& mat) {
  const Mat3 grid = rotation_deg(def.grid_angles_deg).r;
  PlaneWaveSpec spec;
  spec.ell = (grid * def.ell_grid).normalized();
  spec.omega = kOmega;
  spec.family = def.family;
  if (def.polarization) spec.polarization = (grid * *def.polarization).normalized();
  spec.material = MaterialSpec{mat, rotation_deg(def.material_angles_deg), 0};
  return spec;
}

}  // namespace

double degrees(double deg) { return deg * std::numbers::pi / 180.0; }

CaseDefinition case_definition(int id) {
  if (id < 0 || id >= kNumCases) {
    std::ostringstream os;
    os << "invalid case id " << id << " (expected 0.." << kNumCases - 1 << ")";
    throw ConfigError(os.str());
  }
  static constexpr WaveFamily kFamilies[4] = {WaveFamily::FastP, WaveFamily::S1, WaveFamily::S2,
                                              WaveFamily::SlowP};
  CaseDefinition def;
  def.id = id;
  def.family = kFamilies[id % 4];
  const int group = id / 4;
  const Vec3 rotated(30.0, 20.0, 10.0);
  switch (group) {
    case 0: def.ell_grid = Vec3::UnitX(); break;
    case 1: def.ell_grid = Vec3::UnitZ(); break;
    case 8: def.ell_grid = Vec3::Ones().normalized(); break;
    default: def.ell_grid = Vec3::Unit((group - 2) % 3); break;
  }
  if (group >= 2 && group <= 4) def.grid_angles_deg = rotated;
  if (group >= 5 && group <= 7) def.material_angles_deg = rotated;
  // Shear waves along the axis of isotropy need an explicit polarization.
  if (id == 5) def.polarization = Vec3::UnitX();
  if (id == 6) def.polarization = Vec3::UnitY();
  return def;
}

SimulationConfig build_case(int id, int n) {
  if (n < 4) throw ConfigError("case resolution must be at least 4 cells per edge");
  const CaseDefinition def = case_definition(id);
  const auto mat = viscous_sandstone();
  const PlaneWaveSpec spec = case_wave(def, mat);
  const PlaneWaveSolution sol = build_plane_wave(spec);

  SimulationConfig cfg;
  std::ostringstream name;
  name << "case" << id << "-n" << n;
  cfg.name = name.str();
  cfg.case_id = id;
  const double period = 2.0 * std::numbers::pi / kOmega;
  double edge = sol.wavelength;
  cfg.t_end = 1.25 * period;
  if (def.family == WaveFamily::SlowP) {
    if (!sol.decay_length) throw ConfigError("slow P case needs a decaying wave");
    edge = *sol.decay_length;
    PlaneWaveSpec fast = spec;
    fast.family = WaveFamily::FastP;
    fast.polarization.reset();
    fast.ell = spec.material.axes.r.col(0);
    cfg.t_end = 1.25 * edge / build_plane_wave(fast).phase_speed();
  }
  cfg.mapping = GridMapping::box(edge, rotation_deg(def.grid_angles_deg).r);
  cfg.dims = {n, n, n};
  cfg.partition = uniform_partition(0, spec.material.axes.r);
  cfg.materials = {mat};
  cfg.boundary.fill(BoundaryKind::AnalyticFill);
  cfg.initial.kind = InitialKind::PlaneWave;
  cfg.initial.plane_wave = spec;
  cfg.solver.limiter.function = LimiterFunction::None;
  cfg.solver.second_order = true;
  cfg.solver.cfl_target = 0.9;
  return cfg;
}

SimulationConfig build_limiter_case(int n, StrengthRatio ratio, double sigma) {
  if (n < 4) throw ConfigError("limiter study resolution must be at least 4 cells per edge");
  const CaseDefinition def = case_definition(5);
  const auto mat = viscous_sandstone();
  const PlaneWaveSpec spec = case_wave(def, mat);
  const PlaneWaveSolution sol = build_plane_wave(spec);

  SimulationConfig cfg;
  std::ostringstream name;
  name << "limiter-" << (ratio == StrengthRatio::Classical ? "classical" : ratio == StrengthRatio::EFull ? "e-full" : "e-shear")
       << "-n" << n;
  cfg.name = name.str();
  cfg.case_id = 5;
  cfg.mapping = GridMapping::tilt(sol.wavelength, sigma);
  cfg.dims = {n, n, n};
  cfg.partition = uniform_partition(0, spec.material.axes.r);
  cfg.materials = {mat};
  cfg.boundary.fill(BoundaryKind::AnalyticFill);
  cfg.initial.kind = InitialKind::PlaneWave;
  cfg.initial.plane_wave = spec;
  cfg.solver.limiter = {ratio, LimiterFunction::MC};
  cfg.solver.cfl_target = 0.9;
  cfg.t_end = 1.25 * 2.0 * std::numbers::pi / kOmega;
  return cfg;
}

UndulatingBedParams demo_bed() { return UndulatingBedParams{}; }

SimulationConfig build_demo(const DemoOptions& opt) {
  for (int d : opt.dims) {
    if (d < 1) throw ConfigError("demo dimensions must be positive");
  }
  const UndulatingBedParams bed = demo_bed();
  const PoroelasticBase base = sandstone_base(opt.viscous);
  const FluidMaterial fluid = brine();

  SimulationConfig cfg;
  std::ostringstream name;
  name << "demo-" << (opt.viscous ? "viscous" : "inviscid") << "-" << opt.dims[0] << "x" << opt.dims[1] << "x"
       << opt.dims[2];
  cfg.name = name.str();
  cfg.mapping = GridMapping::undulating(bed);
  cfg.dims = opt.dims;
  cfg.partition = undulating_partition(bed);
  cfg.materials = {std::make_shared<const Material>(Material::poroelastic("sandstone", base)),
                   std::make_shared<const Material>(Material::fluid("brine", fluid.bulk_modulus, fluid.density))};
  cfg.boundary = {BoundaryKind::ReflectX, BoundaryKind::ReflectX, BoundaryKind::ReflectY,
                  BoundaryKind::ReflectY, BoundaryKind::Extrapolate0, BoundaryKind::Extrapolate0};
  const double wavelength = fluid.sound_speed / kCaseFrequency;
  cfg.initial.kind = InitialKind::Pulse;
  cfg.initial.pulse.wavelength = wavelength;
  cfg.initial.pulse.z_center = bed.z0 + bed.hx + bed.hy + 0.6 * wavelength;
  cfg.initial.pulse.fluid_material = 1;
  cfg.solver.limiter = {StrengthRatio::EFull, LimiterFunction::MC};
  cfg.solver.discharge_efficiency = 1.0;
  cfg.solver.cfl_target = 0.9;
  cfg.t_end = opt.t_end;
  cfg.output.slice_axis = 2;
  cfg.output.slice_index = demo_slice_layer(bed, opt.dims[2]);
  return cfg;
}

int demo_slice_layer(const UndulatingBedParams& bed, int nz) {
  const int k = static_cast<int>(std::floor(bed.xi_bot * nz + 1e-9)) - 1;
  return std::max(k, 0);
}

}  // namespace porowave
