#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "porowave/materials.hpp"
#include "porowave/system.hpp"

using namespace porowave;

namespace {

MaterialSpec sandstone_spec(bool viscous, const Mat3& axes = Mat3::Identity()) {
  MaterialSpec s;
  s.material = std::make_shared<const Material>(Material::poroelastic("sandstone", sandstone_base(viscous)));
  s.axes.r = axes;
  return s;
}

MaterialSpec brine_spec() {
  MaterialSpec s;
  s.material = std::make_shared<const Material>(Material::fluid("brine", 2.5e9, 1040));
  s.id = 1;
  return s;
}

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

Mat3 random_rotation(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  return rotation_from_angles(u(rng), u(rng), u(rng)).r;
}

std::vector<double> sorted_abs(const EigenBasis& b) {
  std::vector<double> v;
  for (int p = 0; p < b.count; ++p) v.push_back(std::abs(b.speeds[p]));
  std::sort(v.begin(), v.end());
  return v;
}

// Biot speeds along principal axis i from the 2x2 stiffness/mass pencil of
// (solid strain, fluid content): K = [[cu_ii, a M], [a M, M]], R = [[rho, rho_f], [rho_f, m_i]].
std::pair<double, double> biot_p_speeds(const Material& m, int i) {
  const PoroelasticDerived& d = m.derived();
  const double rf = m.base().fluid_density;
  const double k11 = d.undrained(i, i), k12 = d.alpha[i] * d.coupling_modulus, k22 = d.coupling_modulus;
  const double r11 = d.density, r12 = rf, r22 = d.fluid_inertia[i];
  // det(K - c^2 R) = 0, a quadratic in c^2.
  const double a = r11 * r22 - r12 * r12;
  const double b = -(k11 * r22 + k22 * r11 - 2 * k12 * r12);
  const double c = k11 * k22 - k12 * k12;
  const double disc = std::sqrt(b * b - 4 * a * c);
  return {std::sqrt((-b + disc) / (2 * a)), std::sqrt((-b - disc) / (2 * a))};
}

// Shear speed with motion along axis j: c44-type modulus over rho - rho_f^2 / m_j.
double biot_s_speed(const Material& m, double modulus, int j) {
  const PoroelasticDerived& d = m.derived();
  const double rf = m.base().fluid_density;
  return std::sqrt(modulus / (d.density - rf * rf / d.fluid_inertia[j]));
}

// Same eigenvector up to sign.
double sign_free_distance(const State& a, const State& b) { return std::min((a - b).norm(), (a + b).norm()); }

}  // namespace

TEST_CASE("speeds along principal axes match closed-form Biot speeds") {
  const MaterialSpec spec = sandstone_spec(false);
  const Material& m = *spec.material;
  const auto& c = m.base().stiffness;

  const EigenBasis b1 = eigendecompose(spec, Vec3::UnitX());
  REQUIRE(b1.count == 8);
  const auto [pf1, ps1] = biot_p_speeds(m, 0);
  const std::vector<double> expect1 = {ps1, ps1, biot_s_speed(m, c.c55, 2), biot_s_speed(m, c.c55, 2),
                                       biot_s_speed(m, c.c66, 1), biot_s_speed(m, c.c66, 1), pf1, pf1};
  const auto got1 = sorted_abs(b1);
  std::vector<double> e1 = expect1;
  std::sort(e1.begin(), e1.end());
  for (int p = 0; p < 8; ++p) CHECK(got1[p] == doctest::Approx(e1[p]).epsilon(1e-10));

  const EigenBasis b3 = eigendecompose(spec, Vec3::UnitZ());
  const auto [pf3, ps3] = biot_p_speeds(m, 2);
  std::vector<double> e3 = {ps3, ps3, biot_s_speed(m, c.c44, 0), biot_s_speed(m, c.c44, 0),
                            biot_s_speed(m, c.c55, 1), biot_s_speed(m, c.c55, 1), pf3, pf3};
  std::sort(e3.begin(), e3.end());
  const auto got3 = sorted_abs(b3);
  for (int p = 0; p < 8; ++p) CHECK(got3[p] == doctest::Approx(e3[p]).epsilon(1e-10));
}

TEST_CASE("wave ordering and families") {
  const EigenBasis b = eigendecompose(sandstone_spec(true), Vec3(0.3, -0.5, 0.8).normalized());
  REQUIRE(b.count == 8);
  for (int p = 0; p + 1 < b.count; ++p) CHECK(b.speeds[p] < b.speeds[p + 1]);
  for (int p = 0; p < 4; ++p) CHECK(b.speeds[p] == doctest::Approx(-b.speeds[7 - p]).epsilon(1e-12));
  CHECK(b.families[0] == WaveFamily::FastP);
  CHECK(b.families[3] == WaveFamily::SlowP);
  CHECK(b.families[7] == WaveFamily::FastP);
  CHECK(b.families[4] == WaveFamily::SlowP);
}

TEST_CASE("E A_breve is symmetric and D is dissipative") {
  const MaterialSpec spec = sandstone_spec(true);
  const Mat13& e = spec.material->energy().e;
  std::mt19937 rng(17);
  for (int k = 0; k < 50; ++k) {
    const SystemMatrices s = assemble_poro(*spec.material, random_unit(rng));
    const Mat13 ea = e * s.a_breve;
    REQUIRE((ea - ea.transpose()).norm() <= 1e-12 * ea.norm());
    const Mat13 ed = e * s.dissipation;
    REQUIRE((ed - ed.transpose()).norm() <= 1e-12 * ed.norm());
    Eigen::SelfAdjointEigenSolver<Mat13> es(0.5 * (ed + ed.transpose()));
    REQUIRE(es.eigenvalues().maxCoeff() <= 1e-12 * ed.norm());
  }
  // Nonzero block of E D is -diag(eta / kappa_i) on the relative velocity.
  const SystemMatrices s = assemble_poro(*spec.material, Vec3::UnitX());
  const Mat13 ed = e * s.dissipation;
  for (int i = 0; i < 3; ++i) {
    CHECK(ed(var::kQ1 + i, var::kQ1 + i) ==
          doctest::Approx(-1e-3 / spec.material->base().permeability[i]).epsilon(1e-12));
  }
  CHECK(ed.topLeftCorner<10, 10>().norm() == 0.0);
}

TEST_CASE("block and dense decompositions agree") {
  std::mt19937 rng(23);
  for (int k = 0; k < 40; ++k) {
    const MaterialSpec spec = sandstone_spec(k % 2 == 0, random_rotation(rng));
    const Vec3 n = random_unit(rng);
    const EigenBasis fast = eigendecompose(spec, n);
    const EigenBasis dense = eigendecompose_dense(spec, n);
    REQUIRE(fast.count == dense.count);
    for (int p = 0; p < fast.count; ++p) {
      REQUIRE(fast.speeds[p] == doctest::Approx(dense.speeds[p]).epsilon(1e-10));
      // Nondegenerate waves only; shear pairs may rotate within their plane.
      if (fast.families[p] == WaveFamily::FastP || fast.families[p] == WaveFamily::SlowP) {
        REQUIRE(sign_free_distance(fast.vectors[p], dense.vectors[p]) <= 1e-8 * fast.vectors[p].norm());
      }
    }
  }
}

TEST_CASE("eigenvectors are E-orthonormal and diagonalize A") {
  std::mt19937 rng(29);
  for (int k = 0; k < 40; ++k) {
    const Mat3 r = random_rotation(rng);
    const MaterialSpec spec = sandstone_spec(false, r);
    const Vec3 n = random_unit(rng);
    const EigenBasis b = eigendecompose(spec, n);
    const Mat13 eg = energy_global(spec.material->energy(), r);
    for (int p = 0; p < b.count; ++p) {
      for (int q = 0; q < b.count; ++q) {
        const double g = b.vectors[p].dot(eg * b.vectors[q]);
        REQUIRE(std::abs(g - (p == q ? 1.0 : 0.0)) <= 1e-9);
      }
      REQUIRE((b.covectors[p] - eg * b.vectors[p]).norm() <= 1e-9 * b.covectors[p].norm());
    }
    // A r = s r with A assembled in principal axes and rotated.
    const SystemMatrices s = assemble_poro(*spec.material, r.transpose() * n);
    for (int p = 0; p < b.count; ++p) {
      const State local = rotate_state(b.vectors[p], r.transpose());
      const State res = s.a_breve * local - b.speeds[p] * local;
      REQUIRE(res.norm() <= 1e-8 * std::abs(b.speeds[p]) * local.norm());
    }
  }
}

TEST_CASE("rotation consistency of speeds") {
  std::mt19937 rng(31);
  for (int k = 0; k < 30; ++k) {
    const Mat3 r = random_rotation(rng);
    const Vec3 n = random_unit(rng);
    const auto a = sorted_abs(eigendecompose(sandstone_spec(false), n));
    const auto b = sorted_abs(eigendecompose(sandstone_spec(false, r), r * n));
    for (std::size_t p = 0; p < a.size(); ++p) REQUIRE(b[p] == doctest::Approx(a[p]).epsilon(1e-9));
  }
}

TEST_CASE("fluid decomposition is 1D acoustics") {
  const MaterialSpec spec = brine_spec();
  const Vec3 n = Vec3(1, 2, 2) / 3.0;
  const EigenBasis b = eigendecompose(spec, n);
  REQUIRE(b.count == 2);
  const double c = std::sqrt(2.5e9 / 1040);
  CHECK(b.speeds[0] == doctest::Approx(-c).epsilon(1e-14));
  CHECK(b.speeds[1] == doctest::Approx(c).epsilon(1e-14));
  CHECK(b.families[0] == WaveFamily::Acoustic);
  const SystemMatrices s = assemble_fluid(spec.material->fluid(), n);
  Eigen::EigenSolver<Mat13> es(s.a_breve);
  int zeros = 0;
  for (int i = 0; i < kNumVars; ++i) {
    if (std::abs(es.eigenvalues()[i]) < 1e-6 * c) ++zeros;
  }
  CHECK(zeros == 11);
  for (int p = 0; p < 2; ++p) {
    CHECK((s.a_breve * b.vectors[p] - b.speeds[p] * b.vectors[p]).norm() <= 1e-10 * c * b.vectors[p].norm());
    CHECK(b.vectors[p].dot(spec.material->energy().e * b.vectors[p]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("degenerate shear tie-break uses the reference axis") {
  // Along the symmetry axis the two shear speeds coincide.
  const EigenBasis b = eigendecompose(sandstone_spec(false), Vec3::UnitZ());
  CHECK(b.speeds[6] == doctest::Approx(b.speeds[5]).epsilon(1e-12));
  CHECK((shear_reference_axis(Vec3::UnitZ()) - Vec3::UnitX()).norm() == 0.0);
  // S1 carries all of its solid velocity along the reference axis.
  const State& s1 = b.vectors[6];
  CHECK(b.families[6] == WaveFamily::S1);
  CHECK(std::abs(s1[var::kV2]) <= 1e-12 * std::abs(s1[var::kV1]));
  CHECK(std::abs(s1[var::kV1]) > 0);
}

TEST_CASE("Cholesky factor symmetrizes E A") {
  const MaterialSpec spec = sandstone_spec(false);
  const Mat13& e = spec.material->energy().e;
  const SymmetricFactor f = factor_energy(e);
  REQUIRE(f.ok);
  const Mat13 l = f.linv.inverse();
  CHECK((l * l.transpose() - e).norm() <= 1e-12 * e.norm());
  const SystemMatrices s = assemble_poro(*spec.material, Vec3(0.6, 0, 0.8));
  const Mat13 h = f.symmetrize(e * s.a_breve);
  CHECK((h - h.transpose()).norm() <= 1e-12 * h.norm());
}
