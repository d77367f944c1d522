#pragma once

#include <array>
#include <string_view>

#include "porowave/materials.hpp"
#include "porowave/types.hpp"

namespace porowave {

struct SystemMatrices {
  Mat13 a_breve = Mat13::Zero();
  Mat13 dissipation = Mat13::Zero();
  Vec3 normal = Vec3::UnitX();

  auto a_sv() const { return a_breve.block<7, 6>(0, 7); }
  auto a_vs() const { return a_breve.block<6, 7>(7, 0); }
  auto d_v() const { return dissipation.block<6, 6>(7, 7); }
};

// n is given in the material principal axes.
SystemMatrices assemble_poro(const Material& mat, const Vec3& n);
// n is given in global axes (fluids are isotropic).
SystemMatrices assemble_fluid(const FluidMaterial& fluid, const Vec3& n);

enum class WaveFamily { FastP, S1, S2, SlowP, Acoustic };

std::string_view family_name(WaveFamily f);

struct EigenBasis {
  static constexpr int kMaxWaves = 8;
  int count = 0;
  std::array<double, kMaxWaves> speeds{};
  // Unit E-norm eigenvectors in global axes.
  std::array<State, kMaxWaves> vectors;
  // E r_p in global axes, so the strength of r_p in dQ is covectors[p].dot(dQ).
  std::array<State, kMaxWaves> covectors;
  std::array<WaveFamily, kMaxWaves> families{};
  Vec3 normal = Vec3::UnitX();

  double max_speed() const;
  // Index of the first right-going wave.
  int first_right() const { return count / 2; }
};

// Cholesky factor E = L L^T restricted to the rows with a nonzero diagonal.
// linv holds L^{-1} embedded in 13x13 (zero outside the support).
struct SymmetricFactor {
  bool ok = false;
  Mat13 linv = Mat13::Zero();

  // L^{-1} m L^{-T}; symmetric when m = E A with E A symmetric.
  Mat13 symmetrize(const Mat13& m) const { return linv * m * linv.transpose(); }
  // Maps an eigenvector of the symmetrized matrix back: L^{-T} y.
  State unsymmetrize(const State& y) const { return linv.transpose() * y; }
};

SymmetricFactor factor_energy(const Mat13& e);

// Fast decomposition exploiting the block structure of A_breve.
EigenBasis eigendecompose(const MaterialSpec& mat, const Vec3& n_global);
// Reference decomposition of the dense symmetrized 13x13 matrix E^{1/2} A E^{-1/2}.
EigenBasis eigendecompose_dense(const MaterialSpec& mat, const Vec3& n_global);

// Global axis least parallel to n (lowest index on ties); reference for the
// degenerate shear tie-break.
Vec3 shear_reference_axis(const Vec3& n_global);

}  // namespace porowave
