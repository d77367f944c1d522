#pragma once

#include <array>

#include "porowave/system.hpp"
#include "porowave/types.hpp"

namespace porowave {

enum class InterfaceKind { SameMaterial, PoroPoro, PoroFluid, FluidPoro };

struct InterfaceSpec {
  InterfaceKind kind = InterfaceKind::SameMaterial;
  double discharge_efficiency = 1.0;  // eta_d
  double zeta = 0.5;
  // Impedance of the pore fluid of the poroelastic medium (left medium for
  // PoroPoro, the fluid medium for PoroFluid/FluidPoro).
  double fluid_impedance = 0.0;
};

struct WaveSet {
  static constexpr int kMaxWaves = 8;
  int count = 0;
  std::array<double, kMaxWaves> speeds{};
  std::array<State, kMaxWaves> jumps;
  // E r_p * alpha_p = E W_p for same-material solves (E of that material).
  std::array<State, kMaxWaves> energy_jumps;
  bool has_energy_jumps = false;
  std::array<WaveFamily, kMaxWaves> families{};
  State amdq = State::Zero();
  State apdq = State::Zero();
  Vec3 normal = Vec3::UnitX();
  int left_material = 0;
  int right_material = 0;
};

// Recomputes amdq/apdq from the waves.
void accumulate_fluctuations(WaveSet& ws);

WaveSet solve_same_material(const State& ql, const State& qr, const EigenBasis& basis);

using ConditionMatrix = Eigen::Matrix<double, Eigen::Dynamic, kNumVars, Eigen::RowMajor, 8, kNumVars>;

struct InterfaceMatrices {
  ConditionMatrix left;
  ConditionMatrix right;
};

// n points from the poroelastic medium into the fluid.
InterfaceMatrices interface_matrices_poro_fluid(const Vec3& n, double eta_d, double z_f);
InterfaceMatrices interface_matrices_poro_poro(const Vec3& n, double eta_d, double z_f_left,
                                               double zeta = 0.5);
// Matrices for the given kind with n pointing from the left to the right medium.
InterfaceMatrices interface_matrices(const InterfaceSpec& spec, const Vec3& n);

struct InterfaceStates {
  State left = State::Zero();   // Q*_l
  State right = State::Zero();  // Q*_r
  double rcond = 0;
};

using InterfaceLuMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using InterfaceVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

// State-independent part of an interface solve: the equilibrated and
// factored system for one face, with the outgoing eigenvectors.
struct InterfaceSystem {
  InterfaceSpec spec;
  Vec3 normal = Vec3::UnitX();
  int nl = 0;  // left-going waves (left medium)
  int nr = 0;  // right-going waves (right medium)
  std::array<State, 8> vectors;
  std::array<double, 8> speeds{};
  std::array<WaveFamily, 8> families{};
  InterfaceVector rowscale;
  InterfaceVector colscale;
  Eigen::PartialPivLU<InterfaceLuMatrix> lu;
  double rcond = 0;
};

// face_index is only used in error messages.
InterfaceSystem factor_interface(const EigenBasis& basis_l, const EigenBasis& basis_r, const InterfaceSpec& spec,
                                 long long face_index = -1);
WaveSet solve_interface(const State& ql, const State& qr, const InterfaceSystem& sys,
                        InterfaceStates* states = nullptr);
WaveSet solve_interface(const State& ql, const State& qr, const EigenBasis& basis_l,
                        const EigenBasis& basis_r, const InterfaceSpec& spec,
                        long long face_index = -1, InterfaceStates* states = nullptr);

}  // namespace porowave
