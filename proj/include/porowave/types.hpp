#pragma once

#include <Eigen/Dense>

#include <array>
#include <string_view>

namespace porowave {

inline constexpr int kNumVars = 13;

using State = Eigen::Matrix<double, kNumVars, 1>;
using Mat13 = Eigen::Matrix<double, kNumVars, kNumVars>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Component layout of the state vector.
namespace var {
enum : int {
  kTau11 = 0,
  kTau22,
  kTau33,
  kTau23,
  kTau13,
  kTau12,
  kP,
  kV1,
  kV2,
  kV3,
  kQ1,
  kQ2,
  kQ3,
};
}  // namespace var

// Field names used in output files (global axes).
inline constexpr std::array<std::string_view, kNumVars> kFieldNames = {
    "tau_xx", "tau_yy", "tau_zz", "tau_yz", "tau_xz", "tau_xy", "p",
    "v_x",    "v_y",    "v_z",    "q_x",    "q_y",    "q_z"};

}  // namespace porowave
