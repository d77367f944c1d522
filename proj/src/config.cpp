#include "porowave/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "porowave/cases.hpp"
#include "porowave/errors.hpp"

namespace porowave {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) bad("missing key '" + key + "' in " + where);
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    bad("key '" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    bad("key '" + key + "' has the wrong type");
  }
}

Vec3 vec3(const YAML::Node& node, const std::string& key, const Vec3& fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  if (!v.IsSequence() || v.size() != 3) bad("key '" + key + "' must be a list of 3 numbers");
  return Vec3(v[0].as<double>(), v[1].as<double>(), v[2].as<double>());
}

AxesRotation rotation_deg(const Vec3& a) {
  return rotation_from_angles(degrees(a.x()), degrees(a.y()), degrees(a.z()));
}

BoundaryKind boundary_kind(const std::string& s) {
  if (s == "analytic") return BoundaryKind::AnalyticFill;
  if (s == "reflect-x") return BoundaryKind::ReflectX;
  if (s == "reflect-y") return BoundaryKind::ReflectY;
  if (s == "extrapolate") return BoundaryKind::Extrapolate0;
  bad("unknown boundary kind '" + s + "' (analytic, reflect-x, reflect-y, extrapolate)");
}

WaveFamily family_from(const std::string& s) {
  if (s == "FastP" || s == "fast-p") return WaveFamily::FastP;
  if (s == "S1" || s == "s1") return WaveFamily::S1;
  if (s == "S2" || s == "s2") return WaveFamily::S2;
  if (s == "SlowP" || s == "slow-p") return WaveFamily::SlowP;
  if (s == "Acoustic" || s == "acoustic") return WaveFamily::Acoustic;
  bad("unknown wave family '" + s + "'");
}

StrengthRatio ratio_from(const std::string& s) {
  if (s == "classical") return StrengthRatio::Classical;
  if (s == "e-full") return StrengthRatio::EFull;
  if (s == "e-shear") return StrengthRatio::EShearOnly;
  bad("unknown strength_ratio '" + s + "' (classical, e-full, e-shear)");
}

LimiterFunction function_from(const std::string& s) {
  if (s == "none") return LimiterFunction::None;
  if (s == "minmod") return LimiterFunction::Minmod;
  if (s == "mc") return LimiterFunction::MC;
  if (s == "superbee") return LimiterFunction::Superbee;
  bad("unknown limiter function '" + s + "' (none, minmod, mc, superbee)");
}

int axis_from(const YAML::Node& n) {
  const std::string s = n.as<std::string>();
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  bad("slice axis must be x, y or z");
}

std::shared_ptr<const Material> parse_material(const YAML::Node& m) {
  const std::string kind = get<std::string>(m, "kind", "materials entry");
  const std::string name = get_or<std::string>(m, "name", kind);
  if (kind == "sandstone") {
    return std::make_shared<const Material>(Material::poroelastic(name, sandstone_base(get_or(m, "viscous", true))));
  }
  if (kind == "brine") {
    const FluidMaterial f = brine();
    return std::make_shared<const Material>(Material::fluid(name, f.bulk_modulus, f.density));
  }
  if (kind == "fluid") {
    return std::make_shared<const Material>(Material::fluid(name, get<double>(m, "bulk_modulus", "fluid material"),
                                                            get<double>(m, "density", "fluid material")));
  }
  if (kind == "poroelastic") {
    const std::string where = "poroelastic material";
    PoroelasticBase b;
    b.grain_bulk_modulus = get<double>(m, "grain_bulk_modulus", where);
    b.grain_density = get<double>(m, "grain_density", where);
    const YAML::Node c = m["stiffness"];
    if (!c) bad("missing key 'stiffness' in " + where);
    b.stiffness.c11 = get<double>(c, "c11", "stiffness");
    b.stiffness.c12 = get<double>(c, "c12", "stiffness");
    b.stiffness.c13 = get<double>(c, "c13", "stiffness");
    b.stiffness.c22 = get<double>(c, "c22", "stiffness");
    b.stiffness.c23 = get<double>(c, "c23", "stiffness");
    b.stiffness.c33 = get<double>(c, "c33", "stiffness");
    b.stiffness.c44 = get<double>(c, "c44", "stiffness");
    b.stiffness.c55 = get<double>(c, "c55", "stiffness");
    b.stiffness.c66 = get<double>(c, "c66", "stiffness");
    b.porosity = get<double>(m, "porosity", where);
    b.permeability = vec3(m, "permeability", Vec3::Zero());
    b.tortuosity = vec3(m, "tortuosity", Vec3::Ones());
    b.fluid_bulk_modulus = get<double>(m, "fluid_bulk_modulus", where);
    b.fluid_density = get<double>(m, "fluid_density", where);
    b.viscosity = get_or(m, "viscosity", 0.0);
    return std::make_shared<const Material>(Material::poroelastic(name, b));
  }
  bad("unknown material kind '" + kind + "' (sandstone, brine, fluid, poroelastic)");
}

void apply_common(const YAML::Node& root, SimulationConfig& cfg) {
  if (root["name"]) cfg.name = root["name"].as<std::string>();
  if (root["t_end"]) cfg.t_end = root["t_end"].as<double>();
  if (const YAML::Node l = root["limiter"]) {
    if (l["strength_ratio"]) cfg.solver.limiter.strength_ratio = ratio_from(l["strength_ratio"].as<std::string>());
    if (l["function"]) cfg.solver.limiter.function = function_from(l["function"].as<std::string>());
  }
  if (const YAML::Node s = root["solver"]) {
    cfg.solver.cfl_target = get_or(s, "cfl", cfg.solver.cfl_target);
    cfg.solver.second_order = get_or(s, "second_order", cfg.solver.second_order);
    cfg.solver.discharge_efficiency = get_or(s, "discharge_efficiency", cfg.solver.discharge_efficiency);
    cfg.solver.basis_cache_budget = get_or<std::size_t>(s, "basis_cache_budget", cfg.solver.basis_cache_budget);
    cfg.solver.interface_cache_budget =
        get_or<std::size_t>(s, "interface_cache_budget", cfg.solver.interface_cache_budget);
    if (const YAML::Node o = s["sweep_order"]) {
      if (!o.IsSequence() || o.size() != 3) bad("sweep_order must list the directions 1, 2, 3");
      for (int i = 0; i < 3; ++i) cfg.solver.sweep_order[i] = o[i].as<int>() - 1;
    }
  }
  if (const YAML::Node o = root["output"]) {
    cfg.output.directory = get_or<std::string>(o, "dir", cfg.output.directory);
    cfg.output.every = get_or(o, "every", cfg.output.every);
    cfg.output.final_snapshot = get_or(o, "final", cfg.output.final_snapshot);
    if (const YAML::Node f = o["formats"]) {
      cfg.output.formats.clear();
      for (const auto& x : f) {
        const std::string s = x.as<std::string>();
        if (s == "vtk") {
          cfg.output.formats.push_back(SnapshotFormat::Vtk);
        } else if (s == "csv-slice") {
          cfg.output.formats.push_back(SnapshotFormat::CsvSlice);
        } else {
          bad("unknown output format '" + s + "' (vtk, csv-slice)");
        }
      }
    }
    if (const YAML::Node sl = o["slice"]) {
      if (sl["axis"]) cfg.output.slice_axis = axis_from(sl["axis"]);
      cfg.output.slice_index = get_or(sl, "index", cfg.output.slice_index);
    }
  }
}

SimulationConfig parse_generic(const YAML::Node& root) {
  SimulationConfig cfg;
  const YAML::Node g = root["grid"];
  if (!g) bad("missing section 'grid'");
  const YAML::Node dims = g["dims"];
  if (!dims || !dims.IsSequence() || dims.size() != 3) bad("grid.dims must list 3 cell counts");
  for (int i = 0; i < 3; ++i) cfg.dims[i] = dims[i].as<int>();
  const std::string mapping = get<std::string>(g, "mapping", "grid");
  if (mapping == "box") {
    if (g["edge"]) {
      cfg.mapping = GridMapping::box(g["edge"].as<double>(), rotation_deg(vec3(g, "rotation_deg", Vec3::Zero())).r,
                                     vec3(g, "center", Vec3::Zero()));
    } else {
      cfg.mapping = GridMapping::box(vec3(g, "lower", Vec3::Zero()), vec3(g, "extent", Vec3::Ones()));
    }
  } else if (mapping == "tilt") {
    cfg.mapping = GridMapping::tilt(get<double>(g, "length", "grid"), get_or(g, "sigma", 0.1));
  } else if (mapping == "undulating") {
    cfg.mapping = GridMapping::undulating(demo_bed());
  } else {
    bad("unknown grid.mapping '" + mapping + "' (box, tilt, undulating)");
  }

  const YAML::Node mats = root["materials"];
  if (!mats || !mats.IsSequence() || mats.size() == 0) bad("missing list 'materials'");
  for (const auto& m : mats) {
    const int id = get<int>(m, "id", "materials entry");
    if (id < 0 || id > 64) bad("material id out of range");
    if (static_cast<int>(cfg.materials.size()) <= id) cfg.materials.resize(id + 1);
    if (cfg.materials[id]) bad("duplicate material id");
    cfg.materials[id] = parse_material(m);
  }

  const YAML::Node p = root["partition"];
  const std::string pkind = p ? get_or<std::string>(p, "kind", "uniform") : "uniform";
  if (pkind == "uniform") {
    const int id = p ? get_or(p, "material", 0) : 0;
    const Vec3 axes = p ? vec3(p, "axes_deg", Vec3::Zero()) : Vec3::Zero();
    cfg.partition = uniform_partition(id, rotation_deg(axes).r);
  } else if (pkind == "undulating") {
    if (mapping != "undulating") bad("the undulating partition needs the undulating mapping");
    cfg.partition = undulating_partition(demo_bed());
  } else {
    bad("unknown partition kind '" + pkind + "' (uniform, undulating)");
  }

  const YAML::Node b = root["boundary"];
  if (!b) bad("missing section 'boundary'");
  if (b["all"]) {
    cfg.boundary.fill(boundary_kind(b["all"].as<std::string>()));
  } else {
    static const char* keys[6] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
    for (int i = 0; i < 6; ++i) cfg.boundary[i] = boundary_kind(get<std::string>(b, keys[i], "boundary"));
  }

  const YAML::Node ic = root["initial"];
  const std::string ikind = ic ? get<std::string>(ic, "kind", "initial") : "zero";
  if (ikind == "zero") {
    cfg.initial.kind = InitialKind::Zero;
  } else if (ikind == "plane-wave") {
    cfg.initial.kind = InitialKind::PlaneWave;
    PlaneWaveSpec& w = cfg.initial.plane_wave;
    w.ell = vec3(ic, "ell", Vec3::UnitX()).normalized();
    w.omega = 2.0 * std::numbers::pi * get<double>(ic, "frequency", "initial");
    w.family = family_from(get<std::string>(ic, "family", "initial"));
    if (ic["polarization"]) w.polarization = vec3(ic, "polarization", Vec3::UnitX()).normalized();
    const int id = get_or(ic, "material", 0);
    if (id < 0 || id >= static_cast<int>(cfg.materials.size()) || !cfg.materials[id]) {
      bad("initial.material refers to an unknown material id");
    }
    w.material = MaterialSpec{cfg.materials[id], rotation_deg(vec3(ic, "axes_deg", Vec3::Zero())), id};
  } else if (ikind == "pulse") {
    cfg.initial.kind = InitialKind::Pulse;
    cfg.initial.pulse.z_center = get<double>(ic, "z_center", "initial");
    cfg.initial.pulse.wavelength = get<double>(ic, "wavelength", "initial");
    cfg.initial.pulse.fluid_material = get_or(ic, "fluid_material", 1);
  } else {
    bad("unknown initial kind '" + ikind + "' (zero, plane-wave, pulse)");
  }
  return cfg;
}

}  // namespace

void validate(const SimulationConfig& cfg) {
  for (int d : cfg.dims) {
    if (d < 1) bad("grid dimensions must be positive");
  }
  if (!cfg.partition) bad("no material partition");
  if (cfg.materials.empty()) bad("no materials");
  if (!(cfg.t_end > 0) || !std::isfinite(cfg.t_end)) bad("t_end must be a positive number of seconds");
  if (!(cfg.solver.cfl_target > 0 && cfg.solver.cfl_target <= 1.0)) bad("cfl must lie in (0, 1]");
  if (!(cfg.solver.discharge_efficiency >= 0 && cfg.solver.discharge_efficiency <= 1)) {
    bad("discharge_efficiency must lie in [0, 1]");
  }
  for (BoundaryKind k : cfg.boundary) {
    if (k == BoundaryKind::AnalyticFill && cfg.initial.kind != InitialKind::PlaneWave) {
      bad("analytic boundaries need a plane-wave initial condition");
    }
  }
  if (cfg.initial.kind == InitialKind::PlaneWave && !cfg.initial.plane_wave.material.material) {
    bad("plane wave without a material");
  }
  if (cfg.initial.kind == InitialKind::Pulse) {
    const int id = cfg.initial.pulse.fluid_material;
    if (id < 0 || id >= static_cast<int>(cfg.materials.size()) || !cfg.materials[id] ||
        !cfg.materials[id]->is_fluid()) {
      bad("pulse.fluid_material must name a fluid material");
    }
    if (!(cfg.initial.pulse.wavelength > 0)) bad("pulse wavelength must be positive");
  }
  if (cfg.output.every < 0) bad("output.every must be non-negative");
  if (cfg.output.slice_axis < 0 || cfg.output.slice_axis > 2) bad("slice axis must be 0, 1 or 2");
  if (cfg.output.slice_index < 0 || cfg.output.slice_index >= cfg.dims[cfg.output.slice_axis]) {
    bad("slice index outside the grid");
  }
}

SimulationConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    bad(std::string("YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) bad("top level must be a mapping");
  SimulationConfig cfg;
  if (const YAML::Node c = root["case"]) {
    cfg = build_case(get<int>(c, "id", "case"), get<int>(c, "n", "case"));
  } else if (const YAML::Node d = root["demo"]) {
    DemoOptions opt;
    if (const YAML::Node dims = d["dims"]) {
      if (!dims.IsSequence() || dims.size() != 3) bad("demo.dims must list 3 cell counts");
      for (int i = 0; i < 3; ++i) opt.dims[i] = dims[i].as<int>();
    }
    opt.viscous = get_or(d, "viscous", false);
    opt.t_end = get_or(d, "t_end", opt.t_end);
    cfg = build_demo(opt);
  } else if (const YAML::Node l = root["limiter_study"]) {
    cfg = build_limiter_case(get<int>(l, "n", "limiter_study"),
                             ratio_from(get_or<std::string>(l, "strength_ratio", "e-full")), get_or(l, "sigma", 0.1));
  } else {
    cfg = parse_generic(root);
  }
  apply_common(root, cfg);
  validate(cfg);
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace porowave
