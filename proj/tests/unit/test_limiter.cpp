#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "porowave/limiter.hpp"

using namespace porowave;

namespace {

std::shared_ptr<const Material> sandstone() {
  return std::make_shared<const Material>(Material::poroelastic("sandstone", sandstone_base(true)));
}

State random_state(std::mt19937& rng) {
  std::normal_distribution<double> g;
  State q;
  for (int i = 0; i < kNumVars; ++i) q[i] = g(rng) * (i <= var::kP ? 1e7 : 1.0);
  return q;
}

struct Triple {
  WaveSet left, mid, right;
};

// Three neighbouring faces of a smooth-ish pencil in one material.
Triple pencil(std::mt19937& rng, const EigenBasis& b) {
  const State q0 = random_state(rng), q1 = random_state(rng), q2 = random_state(rng), q3 = random_state(rng);
  return {solve_same_material(q0, q1, b), solve_same_material(q1, q2, b), solve_same_material(q2, q3, b)};
}

WaveSet strip_energy(WaveSet ws) {
  ws.has_energy_jumps = false;
  return ws;
}

}  // namespace

TEST_CASE("limiter functions") {
  CHECK(limiter_phi(LimiterFunction::None, -3.0) == 1.0);
  CHECK(limiter_phi(LimiterFunction::Minmod, -1.0) == 0.0);
  CHECK(limiter_phi(LimiterFunction::Minmod, 0.4) == 0.4);
  CHECK(limiter_phi(LimiterFunction::Minmod, 3.0) == 1.0);
  CHECK(limiter_phi(LimiterFunction::MC, -0.5) == 0.0);
  CHECK(limiter_phi(LimiterFunction::MC, 0.2) == doctest::Approx(0.4));
  CHECK(limiter_phi(LimiterFunction::MC, 1.0) == doctest::Approx(1.0));
  CHECK(limiter_phi(LimiterFunction::MC, 2.0) == doctest::Approx(1.5));
  CHECK(limiter_phi(LimiterFunction::MC, 5.0) == doctest::Approx(2.0));
  CHECK(limiter_phi(LimiterFunction::Superbee, 0.25) == doctest::Approx(0.5));
  CHECK(limiter_phi(LimiterFunction::Superbee, 0.75) == doctest::Approx(1.0));
  CHECK(limiter_phi(LimiterFunction::Superbee, 1.5) == doctest::Approx(1.5));
  CHECK(limiter_phi(LimiterFunction::Superbee, 4.0) == doctest::Approx(2.0));
}

TEST_CASE("classical ratio") {
  State w = State::Zero(), up = State::Zero();
  w[0] = 2.0;
  up[0] = 3.0;
  up[1] = 5.0;
  CHECK(theta_classical(w, up) == doctest::Approx(1.5));
  CHECK(theta_classical(State::Zero(), up) == 0.0);
}

TEST_CASE("E-weighted ratio equals the explicit quotient") {
  std::mt19937 rng(71);
  MaterialSpec spec;
  spec.material = sandstone();
  const EnergyOperator e{&spec.material->energy(), Mat3::Identity()};
  const Mat13& em = spec.material->energy().e;
  for (int t = 0; t < 20; ++t) {
    const State w = random_state(rng), up = random_state(rng), loc = random_state(rng);
    const double den = (em * w).dot(loc);
    const double expect = den > 0 ? (em * w).dot(up) / den : 0.0;
    CHECK(theta_E_full(w, up, loc, e) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(theta_E_weighted(State::Zero(), State::Ones(), State::Ones()) == 0.0);
}

TEST_CASE("same-material energy jumps and the generic path give the same factors") {
  std::mt19937 rng(73);
  MaterialSpec spec;
  spec.material = sandstone();
  spec.axes = rotation_from_angles(0.4, 0.3, -0.2);
  const EigenBasis b = eigendecompose(spec, Vec3(0.2, 0.9, -0.4).normalized());
  const EnergyOperator e{&spec.material->energy(), spec.axes.r};
  for (StrengthRatio ratio : {StrengthRatio::EFull, StrengthRatio::EShearOnly}) {
    const LimiterChoice choice{ratio, LimiterFunction::MC};
    for (int t = 0; t < 20; ++t) {
      const Triple p = pencil(rng, b);
      const auto fast = limiter_factors(p.mid, &p.left, &p.right, choice, e, e);
      const auto slow = limiter_factors(strip_energy(p.mid), &p.left, &p.right, choice, e, e);
      for (int k = 0; k < p.mid.count; ++k) REQUIRE(fast[k] == doctest::Approx(slow[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy ratio is invariant under a change of units") {
  std::mt19937 rng(79);
  MaterialSpec spec;
  spec.material = sandstone();
  const EigenBasis b = eigendecompose(spec, Vec3::UnitX());
  const Triple p = pencil(rng, b);

  // Stresses in MPa instead of Pa: Q -> D Q, E -> D^-1 E D^-1.
  Eigen::Matrix<double, kNumVars, 1> d = Eigen::Matrix<double, kNumVars, 1>::Ones();
  for (int i = 0; i <= var::kP; ++i) d[i] = 1e-6;
  auto scale = [&](WaveSet ws) {
    for (int k = 0; k < ws.count; ++k) ws.jumps[k] = d.cwiseProduct(ws.jumps[k]);
    ws.has_energy_jumps = false;
    return ws;
  };
  EnergyMatrix scaled_e = spec.material->energy();
  scaled_e.e = d.cwiseInverse().asDiagonal() * scaled_e.e * d.cwiseInverse().asDiagonal();
  const EnergyOperator e0{&spec.material->energy(), Mat3::Identity()};
  const EnergyOperator e1{&scaled_e, Mat3::Identity()};

  const LimiterChoice full{StrengthRatio::EFull, LimiterFunction::MC};
  const auto a = limiter_factors(strip_energy(p.mid), &p.left, &p.right, full, e0, e0);
  const WaveSet l1 = scale(p.left), m1 = scale(p.mid), r1 = scale(p.right);
  const auto c = limiter_factors(m1, &l1, &r1, full, e1, e1);
  for (int k = 0; k < p.mid.count; ++k) CHECK(a[k] == doctest::Approx(c[k]).epsilon(1e-9));
}

TEST_CASE("smooth data is not limited and extrema are") {
  MaterialSpec spec;
  spec.material = sandstone();
  const EigenBasis b = eigendecompose(spec, Vec3::UnitX());
  const EnergyOperator e{&spec.material->energy(), Mat3::Identity()};
  State dq = State::Zero();
  dq[var::kV1] = 1.0;
  dq[var::kTau11] = 2e7;
  const WaveSet w = solve_same_material(State::Zero(), dq, b);
  const LimiterChoice choice{StrengthRatio::EFull, LimiterFunction::MC};
  // Linear data: equal jumps on all three faces give theta = 1.
  const auto phi = limiter_factors(w, &w, &w, choice, e, e);
  for (int k = 0; k < w.count; ++k) {
    if (w.jumps[k].norm() > 0) CHECK(phi[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Reversed neighbours (an extremum) give theta = -1 and phi = 0.
  const WaveSet rev = solve_same_material(dq, State::Zero(), b);
  const auto phi2 = limiter_factors(w, &rev, &rev, choice, e, e);
  for (int k = 0; k < w.count; ++k) CHECK(phi2[k] == 0.0);
  // Missing upwind neighbours give theta = 0 and MC(0) = 0.
  const auto phi3 = limiter_factors(w, nullptr, nullptr, choice, e, e);
  for (int k = 0; k < w.count; ++k) CHECK(phi3[k] == 0.0);
}

TEST_CASE("apply_limiter scales jumps by phi") {
  std::mt19937 rng(83);
  MaterialSpec spec;
  spec.material = sandstone();
  const EigenBasis b = eigendecompose(spec, Vec3::UnitY());
  const EnergyOperator e{&spec.material->energy(), Mat3::Identity()};
  const Triple p = pencil(rng, b);
  const LimiterChoice choice{StrengthRatio::EFull, LimiterFunction::Superbee};
  const auto phi = limiter_factors(p.mid, &p.left, &p.right, choice, e, e);
  const WaveSet out = apply_limiter(p.mid, &p.left, &p.right, choice, e, e);
  for (int k = 0; k < p.mid.count; ++k) CHECK((out.jumps[k] - phi[k] * p.mid.jumps[k]).norm() == 0.0);
}
