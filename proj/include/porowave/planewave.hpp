#pragma once

#include <complex>
#include <optional>

#include "porowave/materials.hpp"
#include "porowave/system.hpp"
#include "porowave/types.hpp"

namespace porowave {

using Complex = std::complex<double>;
using CState = Eigen::Matrix<Complex, kNumVars, 1>;

struct PlaneWaveSpec {
  Vec3 ell = Vec3::UnitX();  // propagation direction, global axes
  double omega = 0;          // rad/s
  WaveFamily family = WaveFamily::FastP;
  std::optional<Vec3> polarization;  // s, global axes
  MaterialSpec material;
};

struct PlaneWaveSolution {
  Complex k;  // 1/m, Re k > 0
  CState v = CState::Zero();  // global axes, unit E-norm
  Vec3 ell = Vec3::UnitX();
  double omega = 0;
  WaveFamily family = WaveFamily::FastP;
  double wavelength = 0;
  std::optional<double> decay_length;

  double phase_speed() const { return omega / k.real(); }
};

PlaneWaveSolution build_plane_wave(const PlaneWaveSpec& spec);

// Re[v exp(i (k ell.x - omega t))].
State evaluate(const PlaneWaveSolution& sol, const Vec3& x, double t);

// -i omega v + i k A(ell) v - D v in the global frame, for checking a solution.
CState plane_wave_residual(const PlaneWaveSolution& sol, const MaterialSpec& material);

}  // namespace porowave
