#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "porowave/cases.hpp"
#include "porowave/planewave.hpp"

using namespace porowave;

namespace {

constexpr double kOmega = 2 * std::numbers::pi * 1e4;

PlaneWaveSpec sandstone_wave(bool viscous, WaveFamily fam, const Vec3& ell, const Mat3& axes = Mat3::Identity()) {
  PlaneWaveSpec s;
  s.ell = ell;
  s.omega = kOmega;
  s.family = fam;
  s.material.material = std::make_shared<const Material>(Material::poroelastic("sandstone", sandstone_base(viscous)));
  s.material.axes.r = axes;
  return s;
}

// Residual of -i w v + i k A v - D v evaluated in principal axes, written
// out independently of the library's residual routine.
double local_residual(const PlaneWaveSolution& sol, const MaterialSpec& m) {
  const Mat3& r = m.axes.r;
  const SystemMatrices s = assemble_poro(*m.material, r.transpose() * sol.ell);
  State re, im;
  for (int i = 0; i < kNumVars; ++i) {
    re[i] = sol.v[i].real();
    im[i] = sol.v[i].imag();
  }
  const State lre = rotate_state(re, r.transpose()), lim = rotate_state(im, r.transpose());
  CState v;
  for (int i = 0; i < kNumVars; ++i) v[i] = Complex(lre[i], lim[i]);
  const Complex iu(0, 1);
  const CState res = -iu * sol.omega * v + iu * sol.k * (s.a_breve.cast<Complex>() * v) -
                     s.dissipation.cast<Complex>() * v;
  return res.norm() / (sol.omega * v.norm());
}

}  // namespace

TEST_CASE("inviscid wavenumbers follow from the eigen speeds") {
  for (WaveFamily fam : {WaveFamily::FastP, WaveFamily::S1, WaveFamily::S2, WaveFamily::SlowP}) {
    PlaneWaveSpec spec = sandstone_wave(false, fam, Vec3::UnitZ());
    if (fam == WaveFamily::S1) spec.polarization = Vec3::UnitX();
    if (fam == WaveFamily::S2) spec.polarization = Vec3::UnitY();
    const PlaneWaveSolution sol = build_plane_wave(spec);
    CHECK(std::abs(sol.k.imag()) < 1e-12 * sol.k.real());
    const EigenBasis b = eigendecompose(spec.material, Vec3::UnitZ());
    int idx = -1;
    for (int p = b.first_right(); p < b.count; ++p) {
      if (b.families[p] == fam) idx = p;
    }
    REQUIRE(idx >= 0);
    CHECK(sol.phase_speed() == doctest::Approx(b.speeds[idx]).epsilon(1e-10));
    CHECK(sol.wavelength == doctest::Approx(2 * std::numbers::pi / sol.k.real()).epsilon(1e-14));
  }
}

TEST_CASE("viscous solutions satisfy the dispersion relation") {
  const Mat3 r = rotation_from_angles(0.5, 0.35, 0.17).r;
  for (WaveFamily fam : {WaveFamily::FastP, WaveFamily::S1, WaveFamily::S2, WaveFamily::SlowP}) {
    for (const Vec3& ell : {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitZ()), Vec3(Vec3::Ones().normalized())}) {
      const PlaneWaveSpec spec = sandstone_wave(true, fam, ell, r);
      const PlaneWaveSolution sol = build_plane_wave(spec);
      CHECK(local_residual(sol, spec.material) < 1e-10);
      CHECK(plane_wave_residual(sol, spec.material).norm() / (sol.omega * sol.v.norm()) < 1e-10);
      CHECK(sol.k.real() > 0);
      CHECK(sol.k.imag() > 0);
    }
  }
}

TEST_CASE("slow P wave is strongly damped and reports its decay length") {
  const PlaneWaveSolution fast = build_plane_wave(sandstone_wave(true, WaveFamily::FastP, Vec3::UnitX()));
  const PlaneWaveSolution slow = build_plane_wave(sandstone_wave(true, WaveFamily::SlowP, Vec3::UnitX()));
  REQUIRE(slow.decay_length);
  CHECK(*slow.decay_length == doctest::Approx(1 / slow.k.imag()).epsilon(1e-14));
  CHECK(slow.k.imag() / slow.k.real() > 0.1);
  CHECK(fast.k.imag() / fast.k.real() < 0.01);
}

TEST_CASE("evaluation is periodic in time and decays in space") {
  const PlaneWaveSpec spec = sandstone_wave(true, WaveFamily::FastP, Vec3(1, 2, 2) / 3.0);
  const PlaneWaveSolution sol = build_plane_wave(spec);
  const Vec3 x(0.1, -0.2, 0.05);
  const double period = 2 * std::numbers::pi / kOmega;
  const State a = evaluate(sol, x, 1.3e-5);
  CHECK((evaluate(sol, x, 1.3e-5 + period) - a).norm() <= 1e-12 * a.norm() + 1e-12 * sol.v.norm());
  // One wavelength downstream the field repeats, scaled by exp(-Im k lambda).
  const State b = evaluate(sol, x + sol.wavelength * sol.ell, 1.3e-5);
  const double f = std::exp(-sol.k.imag() * sol.wavelength);
  CHECK((b - f * a).norm() <= 1e-10 * sol.v.norm());
  // Transverse shifts leave the field unchanged.
  const Vec3 t = sol.ell.unitOrthogonal();
  CHECK((evaluate(sol, x + 0.37 * t, 1.3e-5) - a).norm() <= 1e-10 * sol.v.norm());
}

TEST_CASE("unit energy norm and phase convention") {
  const PlaneWaveSpec spec = sandstone_wave(true, WaveFamily::FastP, Vec3::UnitX());
  const PlaneWaveSolution sol = build_plane_wave(spec);
  const Mat13& e = spec.material.material->energy().e;
  const Complex n = sol.v.dot(e.cast<Complex>() * sol.v);
  CHECK(n.real() == doctest::Approx(1.0).epsilon(1e-12));
  // Solid velocity along ell is real and positive.
  const Complex vl = sol.v[var::kV1];
  CHECK(vl.real() > 0);
  CHECK(std::abs(vl.imag()) <= 1e-12 * std::abs(vl));
}

TEST_CASE("shear polarization is honoured along the symmetry axis") {
  PlaneWaveSpec spec = sandstone_wave(true, WaveFamily::S1, Vec3::UnitZ());
  spec.polarization = Vec3::UnitY();
  const PlaneWaveSolution sol = build_plane_wave(spec);
  CHECK(std::abs(sol.v[var::kV1]) <= 1e-12 * std::abs(sol.v[var::kV2]));
  CHECK(std::abs(sol.v[var::kV2]) > 0);
}

TEST_CASE("fluid plane wave closed form") {
  PlaneWaveSpec spec;
  spec.ell = Vec3(0, 0.6, 0.8);
  spec.omega = kOmega;
  spec.family = WaveFamily::Acoustic;
  spec.material.material = std::make_shared<const Material>(Material::fluid("brine", 2.5e9, 1040));
  const PlaneWaveSolution sol = build_plane_wave(spec);
  const double c = std::sqrt(2.5e9 / 1040), z = std::sqrt(2.5e9 * 1040);
  CHECK(sol.k.real() == doctest::Approx(kOmega / c).epsilon(1e-14));
  CHECK(sol.k.imag() == 0.0);
  // p = Z (q . ell) for a right-going acoustic wave.
  const Complex ql = sol.v.segment<3>(var::kQ1).dot(spec.ell.cast<Complex>());
  CHECK(std::abs(sol.v[var::kP] - z * ql) <= 1e-12 * std::abs(sol.v[var::kP]));
}

TEST_CASE("case table") {
  CHECK(case_definition(0).family == WaveFamily::FastP);
  CHECK(case_definition(3).family == WaveFamily::SlowP);
  CHECK((case_definition(5).ell_grid - Vec3::UnitZ()).norm() == 0.0);
  CHECK((*case_definition(5).polarization - Vec3::UnitX()).norm() == 0.0);
  CHECK((*case_definition(6).polarization - Vec3::UnitY()).norm() == 0.0);
  CHECK((case_definition(32).ell_grid - Vec3::Ones().normalized()).norm() < 1e-15);
  CHECK((case_definition(9).ell_grid - Vec3::UnitX()).norm() == 0.0);
  CHECK((case_definition(13).ell_grid - Vec3::UnitY()).norm() == 0.0);
  CHECK(case_definition(9).grid_angles_deg.norm() > 0);
  CHECK(case_definition(21).material_angles_deg.norm() > 0);
  CHECK_THROWS(case_definition(36));
}
