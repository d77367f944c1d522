#pragma once

#include <memory>
#include <optional>
#include <string>

#include "porowave/types.hpp"

namespace porowave {

// Orthotropic drained stiffness in Voigt order (11,22,33,23,13,12), Pa.
struct DrainedStiffness {
  double c11 = 0, c12 = 0, c13 = 0, c22 = 0, c23 = 0, c33 = 0;
  double c44 = 0, c55 = 0, c66 = 0;

  Mat6 matrix() const;
};

struct PoroelasticBase {
  double grain_bulk_modulus = 0;  // K_s, Pa
  double grain_density = 0;       // rho_s, kg/m^3
  DrainedStiffness stiffness;     // c_IJ, Pa
  double porosity = 0;            // phi
  Vec3 permeability = Vec3::Zero();  // kappa_i, m^2
  Vec3 tortuosity = Vec3::Ones();    // T_i
  double fluid_bulk_modulus = 0;  // K_f, Pa
  double fluid_density = 0;       // rho_f, kg/m^3
  double viscosity = 0;           // eta, kg/(m s)
};

struct PoroelasticDerived {
  Vec3 alpha = Vec3::Zero();  // alpha_1..3; alpha_4..6 are structural zeros
  double coupling_modulus = 0;  // M, Pa
  double bulk_stiffness = 0;    // K*, Pa
  Mat6 undrained = Mat6::Zero();  // c^u_IJ, Pa
  double density = 0;             // rho, kg/m^3
  Vec3 fluid_inertia = Vec3::Zero();  // m_i, kg/m^3
  Vec3 inertia_det = Vec3::Zero();    // Delta_i = rho m_i - rho_f^2
  double critical_frequency = 0;      // omega_c, rad/s (infinite when eta = 0)
  std::optional<Vec3> dissipation_time;  // tau_d,i = Delta_i kappa_i / (rho eta), s

  Vec6 alpha6() const;
};

struct FluidMaterial {
  double bulk_modulus = 0;  // K_f, Pa
  double density = 0;       // rho_f, kg/m^3
  double impedance = 0;     // Z_f, Pa s/m
  double sound_speed = 0;   // c, m/s
};

FluidMaterial make_fluid(double bulk_modulus, double density);

struct EnergyMatrix {
  Mat13 e = Mat13::Zero();
  Mat6 compliance = Mat6::Zero();  // S, drained compliance (zero for fluids)

  auto stress_block() const { return e.topLeftCorner<7, 7>(); }
  auto velocity_block() const { return e.bottomRightCorner<6, 6>(); }
};

PoroelasticDerived derive_poroelastic(const PoroelasticBase& base);

class Material {
 public:
  static Material poroelastic(std::string name, const PoroelasticBase& base);
  static Material fluid(std::string name, double bulk_modulus, double density);

  const std::string& name() const { return name_; }
  bool is_fluid() const { return fluid_mode_; }
  const PoroelasticBase& base() const;
  const PoroelasticDerived& derived() const;
  const FluidMaterial& fluid() const;
  const EnergyMatrix& energy() const { return energy_; }
  // Density of the pore fluid (poroelastic) or of the fluid itself.
  double fluid_density() const;
  double fluid_impedance() const;

 private:
  std::string name_;
  bool fluid_mode_ = false;
  PoroelasticBase base_{};
  PoroelasticDerived derived_{};
  FluidMaterial fluid_{};
  EnergyMatrix energy_{};
};

EnergyMatrix energy_matrix(const Material& mat);
EnergyMatrix energy_matrix(const PoroelasticBase& base, const PoroelasticDerived& derived);
EnergyMatrix energy_matrix(const FluidMaterial& fluid);

struct AxesRotation {
  Mat3 r = Mat3::Identity();  // principal axes -> global axes
  std::optional<Vec3> angles;  // (yaw, pitch, roll) when built from angles

  static AxesRotation identity() { return {}; }
};

AxesRotation rotation_from_angles(double yaw, double pitch, double roll);
AxesRotation rotation_from_surface_normal(const Vec3& normal);

struct MaterialSpec {
  std::shared_ptr<const Material> material;
  AxesRotation axes;
  int id = 0;
};

// Principal -> global when inverse is false; global -> principal otherwise.
State state_to_axes(const State& q, const AxesRotation& axes, bool inverse);

// Applies T(r): tensor part r tau r^T, vector parts r v, p unchanged.
State rotate_state(const State& q, const Mat3& r);
// Applies T(r)^{-T}, the map taking covectors (rows of E) between frames:
// <rotate_covector(u, r), rotate_state(x, r)> == <u, x>.
State rotate_covector(const State& u, const Mat3& r);

// E in global axes applied to x for a material with principal axes r.
State apply_energy(const EnergyMatrix& e, const Mat3& r, const State& x);
Mat13 energy_global(const EnergyMatrix& e, const Mat3& r);

// Orthotropic sandstone saturated with brine (transversely isotropic about axis 3).
PoroelasticBase sandstone_base(bool viscous);
FluidMaterial brine();

}  // namespace porowave
