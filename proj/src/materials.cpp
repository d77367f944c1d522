#include "porowave/materials.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

Mat3 voigt_to_tensor(const State& q) {
  Mat3 t;
  t << q[var::kTau11], q[var::kTau12], q[var::kTau13],
       q[var::kTau12], q[var::kTau22], q[var::kTau23],
       q[var::kTau13], q[var::kTau23], q[var::kTau33];
  return t;
}

void tensor_to_voigt(const Mat3& t, State& q) {
  q[var::kTau11] = t(0, 0);
  q[var::kTau22] = t(1, 1);
  q[var::kTau33] = t(2, 2);
  q[var::kTau23] = 0.5 * (t(1, 2) + t(2, 1));
  q[var::kTau13] = 0.5 * (t(0, 2) + t(2, 0));
  q[var::kTau12] = 0.5 * (t(0, 1) + t(1, 0));
}

void validate_base(const PoroelasticBase& b) {
  auto fail = [](const std::string& what) {
    throw MaterialError("invalid poroelastic material: " + what);
  };
  if (!(b.grain_bulk_modulus > 0)) fail("K_s must be positive");
  if (!(b.grain_density > 0)) fail("rho_s must be positive");
  if (!(b.porosity > 0 && b.porosity < 1)) fail("porosity must lie in (0,1)");
  for (int i = 0; i < 3; ++i) {
    if (!(b.permeability[i] > 0)) fail("permeability must be positive");
    if (!(b.tortuosity[i] >= 1)) fail("tortuosity must be >= 1");
  }
  if (!(b.fluid_bulk_modulus > 0)) fail("K_f must be positive");
  if (!(b.fluid_density > 0)) fail("rho_f must be positive");
  if (!(b.viscosity >= 0)) fail("viscosity must be non-negative");
}

Mat6 invert_stiffness(const Mat6& c) {
  Eigen::PartialPivLU<Mat6> lu(c);
  double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    std::ostringstream os;
    os << "singular stiffness (reciprocal condition estimate " << rcond << ")";
    throw MaterialError(os.str());
  }
  return lu.inverse();
}

}  // namespace

Mat6 DrainedStiffness::matrix() const {
  Mat6 m = Mat6::Zero();
  m(0, 0) = c11;
  m(0, 1) = m(1, 0) = c12;
  m(0, 2) = m(2, 0) = c13;
  m(1, 1) = c22;
  m(1, 2) = m(2, 1) = c23;
  m(2, 2) = c33;
  m(3, 3) = c44;
  m(4, 4) = c55;
  m(5, 5) = c66;
  return m;
}

Vec6 PoroelasticDerived::alpha6() const {
  Vec6 a = Vec6::Zero();
  a.head<3>() = alpha;
  return a;
}

FluidMaterial make_fluid(double bulk_modulus, double density) {
  if (!(bulk_modulus > 0) || !(density > 0)) {
    throw MaterialError("invalid fluid: K_f and rho_f must be positive");
  }
  FluidMaterial f;
  f.bulk_modulus = bulk_modulus;
  f.density = density;
  f.impedance = std::sqrt(bulk_modulus * density);
  f.sound_speed = std::sqrt(bulk_modulus / density);
  return f;
}

PoroelasticDerived derive_poroelastic(const PoroelasticBase& b) {
  validate_base(b);
  const Mat6 c = b.stiffness.matrix();
  invert_stiffness(c);  // rejects singular stiffness

  PoroelasticDerived d;
  const double ks = b.grain_bulk_modulus;
  for (int i = 0; i < 3; ++i) {
    d.alpha[i] = 1.0 - (c(i, 0) + c(i, 1) + c(i, 2)) / (3.0 * ks);
  }
  d.bulk_stiffness = c.topLeftCorner<3, 3>().sum() / 9.0;
  const double denom = (1.0 - d.bulk_stiffness / ks) -
                       b.porosity * (1.0 - ks / b.fluid_bulk_modulus);
  d.coupling_modulus = ks / denom;
  if (!(d.coupling_modulus > 0) || !std::isfinite(d.coupling_modulus)) {
    throw MaterialError("invalid poroelastic material: coupling modulus M is not positive");
  }
  const Vec6 a6 = d.alpha6();
  d.undrained = c + d.coupling_modulus * a6 * a6.transpose();

  const double rf = b.fluid_density;
  d.density = (1.0 - b.porosity) * b.grain_density + b.porosity * rf;
  d.critical_frequency = std::numeric_limits<double>::infinity();
  Vec3 tau;
  for (int i = 0; i < 3; ++i) {
    d.fluid_inertia[i] = rf * b.tortuosity[i] / b.porosity;
    d.inertia_det[i] = d.density * d.fluid_inertia[i] - rf * rf;
    if (!(d.inertia_det[i] > 0)) {
      std::ostringstream os;
      os << "degenerate inertia: Delta_" << (i + 1) << " = " << d.inertia_det[i];
      throw MaterialError(os.str());
    }
    if (b.viscosity > 0) {
      const double wc =
          b.viscosity * b.porosity / (rf * b.tortuosity[i] * b.permeability[i]);
      d.critical_frequency = std::min(d.critical_frequency, wc);
      tau[i] = d.inertia_det[i] * b.permeability[i] / (d.density * b.viscosity);
    }
  }
  if (b.viscosity > 0) d.dissipation_time = tau;
  return d;
}

EnergyMatrix energy_matrix(const PoroelasticBase& base, const PoroelasticDerived& d) {
  EnergyMatrix em;
  em.compliance = invert_stiffness(base.stiffness.matrix());
  const Mat6& s = em.compliance;
  const Vec6 a = d.alpha6();
  const Vec6 sa = s * a;
  em.e.topLeftCorner<6, 6>() = s;
  em.e.block<6, 1>(0, 6) = sa;
  em.e.block<1, 6>(6, 0) = sa.transpose();
  em.e(6, 6) = 1.0 / d.coupling_modulus + a.dot(sa);
  for (int i = 0; i < 3; ++i) {
    em.e(7 + i, 7 + i) = d.density;
    em.e(7 + i, 10 + i) = base.fluid_density;
    em.e(10 + i, 7 + i) = base.fluid_density;
    em.e(10 + i, 10 + i) = d.fluid_inertia[i];
  }
  // Symmetrize away rounding from the inversion.
  em.e = 0.5 * (em.e + em.e.transpose()).eval();
  return em;
}

EnergyMatrix energy_matrix(const FluidMaterial& f) {
  EnergyMatrix em;
  em.e(6, 6) = 1.0 / f.bulk_modulus;
  for (int i = 0; i < 3; ++i) em.e(10 + i, 10 + i) = f.density;
  return em;
}

EnergyMatrix energy_matrix(const Material& mat) {
  return mat.is_fluid() ? energy_matrix(mat.fluid())
                        : energy_matrix(mat.base(), mat.derived());
}

Material Material::poroelastic(std::string name, const PoroelasticBase& base) {
  Material m;
  m.name_ = std::move(name);
  m.fluid_mode_ = false;
  m.base_ = base;
  m.derived_ = derive_poroelastic(base);
  m.fluid_ = make_fluid(base.fluid_bulk_modulus, base.fluid_density);
  m.energy_ = energy_matrix(m.base_, m.derived_);
  return m;
}

Material Material::fluid(std::string name, double bulk_modulus, double density) {
  Material m;
  m.name_ = std::move(name);
  m.fluid_mode_ = true;
  m.fluid_ = make_fluid(bulk_modulus, density);
  m.energy_ = energy_matrix(m.fluid_);
  return m;
}

const PoroelasticBase& Material::base() const {
  if (fluid_mode_) throw MaterialError("material '" + name_ + "' is a fluid");
  return base_;
}

const PoroelasticDerived& Material::derived() const {
  if (fluid_mode_) throw MaterialError("material '" + name_ + "' is a fluid");
  return derived_;
}

const FluidMaterial& Material::fluid() const { return fluid_; }

double Material::fluid_density() const { return fluid_.density; }

double Material::fluid_impedance() const { return fluid_.impedance; }

AxesRotation rotation_from_angles(double yaw, double pitch, double roll) {
  const double cz = std::cos(yaw), sz = std::sin(yaw);
  const double cy = std::cos(-pitch), sy = std::sin(-pitch);
  const double cx = std::cos(roll), sx = std::sin(roll);
  Mat3 rz, ry, rx;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  AxesRotation a;
  a.r = rz * ry * rx;
  a.angles = Vec3(yaw, pitch, roll);
  return a;
}

AxesRotation rotation_from_surface_normal(const Vec3& normal) {
  const Vec3 n = normal.normalized();
  const double c = n.z();
  if (c <= -1.0 + 1e-12) {
    throw MaterialError("surface normal is antiparallel to the z axis");
  }
  const Vec3 k = Vec3::UnitZ().cross(n);
  Mat3 kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  AxesRotation a;
  a.r = Mat3::Identity() + kx + kx * kx / (1.0 + c);
  return a;
}

State rotate_state(const State& q, const Mat3& r) {
  State out;
  tensor_to_voigt(r * voigt_to_tensor(q) * r.transpose(), out);
  out[var::kP] = q[var::kP];
  out.segment<3>(var::kV1) = r * q.segment<3>(var::kV1);
  out.segment<3>(var::kQ1) = r * q.segment<3>(var::kQ1);
  return out;
}

State rotate_covector(const State& u, const Mat3& r) {
  // Stress covector: halve shear entries to form a tensor, conjugate, then
  // double the shear entries again.
  Mat3 t;
  t << u[var::kTau11], 0.5 * u[var::kTau12], 0.5 * u[var::kTau13],
       0.5 * u[var::kTau12], u[var::kTau22], 0.5 * u[var::kTau23],
       0.5 * u[var::kTau13], 0.5 * u[var::kTau23], u[var::kTau33];
  const Mat3 rt = r * t * r.transpose();
  State out;
  out[var::kTau11] = rt(0, 0);
  out[var::kTau22] = rt(1, 1);
  out[var::kTau33] = rt(2, 2);
  out[var::kTau23] = rt(1, 2) + rt(2, 1);
  out[var::kTau13] = rt(0, 2) + rt(2, 0);
  out[var::kTau12] = rt(0, 1) + rt(1, 0);
  out[var::kP] = u[var::kP];
  out.segment<3>(var::kV1) = r * u.segment<3>(var::kV1);
  out.segment<3>(var::kQ1) = r * u.segment<3>(var::kQ1);
  return out;
}

State state_to_axes(const State& q, const AxesRotation& axes, bool inverse) {
  return rotate_state(q, inverse ? Mat3(axes.r.transpose()) : axes.r);
}

State apply_energy(const EnergyMatrix& e, const Mat3& r, const State& x) {
  const State xp = rotate_state(x, r.transpose());
  return rotate_covector(e.e * xp, r);
}

Mat13 energy_global(const EnergyMatrix& e, const Mat3& r) {
  Mat13 out;
  for (int j = 0; j < kNumVars; ++j) {
    out.col(j) = apply_energy(e, r, State::Unit(j));
  }
  return 0.5 * (out + out.transpose());
}

PoroelasticBase sandstone_base(bool viscous) {
  PoroelasticBase b;
  b.grain_bulk_modulus = 80e9;
  b.grain_density = 2500;
  b.stiffness.c11 = 71.8e9;
  b.stiffness.c12 = 3.2e9;
  b.stiffness.c13 = 1.2e9;
  b.stiffness.c22 = b.stiffness.c11;
  b.stiffness.c23 = b.stiffness.c13;
  b.stiffness.c33 = 53.4e9;
  b.stiffness.c55 = 26.1e9;
  b.stiffness.c44 = b.stiffness.c55;
  b.stiffness.c66 = 0.5 * (b.stiffness.c11 - b.stiffness.c12);
  b.porosity = 0.2;
  b.permeability = Vec3(600e-15, 600e-15, 100e-15);
  b.tortuosity = Vec3(2, 2, 3.6);
  b.fluid_bulk_modulus = 2.5e9;
  b.fluid_density = 1040;
  b.viscosity = viscous ? 1e-3 : 0.0;
  return b;
}

FluidMaterial brine() { return make_fluid(2.5e9, 1040); }

}  // namespace porowave
