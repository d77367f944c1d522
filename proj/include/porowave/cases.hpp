#pragma once

#include <array>
#include <optional>

#include "porowave/config.hpp"

namespace porowave {

inline constexpr int kNumCases = 36;
inline constexpr double kCaseFrequency = 1e4;  // Hz

struct CaseDefinition {
  int id = 0;
  Vec3 grid_angles_deg = Vec3::Zero();      // yaw, pitch, roll
  Vec3 material_angles_deg = Vec3::Zero();  // yaw, pitch, roll
  Vec3 ell_grid = Vec3::UnitX();
  WaveFamily family = WaveFamily::FastP;
  std::optional<Vec3> polarization;  // grid axes
};

CaseDefinition case_definition(int id);

// Viscous sandstone plane-wave case on an n^3 cube centred at the origin.
SimulationConfig build_case(int id, int n);

// Case 5 wave on the tilt-mapped grid of edge one wavelength, MC limiter.
SimulationConfig build_limiter_case(int n, StrengthRatio ratio, double sigma = 0.1);

struct DemoOptions {
  std::array<int, 3> dims{60, 60, 120};
  bool viscous = false;
  double t_end = 400e-6;
};

UndulatingBedParams demo_bed();
SimulationConfig build_demo(const DemoOptions& opt);

// Index of the highest cell layer lying entirely below xi_bot.
int demo_slice_layer(const UndulatingBedParams& bed, int nz);

double degrees(double deg);

}  // namespace porowave
