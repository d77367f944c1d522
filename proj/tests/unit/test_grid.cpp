#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "porowave/cases.hpp"
#include "porowave/errors.hpp"
#include "porowave/grid.hpp"

using namespace porowave;

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr double kGl5x[5] = {0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842, 0.953089922969332};
constexpr double kGl5w[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444, 0.239314335249683,
                             0.118463442528095};

Vec3 trilinear_point(const std::array<Vec3, 8>& v, double a, double b, double c) {
  Vec3 r = Vec3::Zero();
  for (int n = 0; n < 8; ++n) {
    const double wa = (n & 1) ? a : 1 - a;
    const double wb = (n & 2) ? b : 1 - b;
    const double wc = (n & 4) ? c : 1 - c;
    r += wa * wb * wc * v[n];
  }
  return r;
}

// Jacobian columns by central differences of the (polynomial) map; the step
// is exact for the trilinear map up to rounding.
Mat3 jacobian(const std::array<Vec3, 8>& v, double a, double b, double c) {
  const double h = 1e-3;
  Mat3 j;
  j.col(0) = (trilinear_point(v, a + h, b, c) - trilinear_point(v, a - h, b, c)) / (2 * h);
  j.col(1) = (trilinear_point(v, a, b + h, c) - trilinear_point(v, a, b - h, c)) / (2 * h);
  j.col(2) = (trilinear_point(v, a, b, c + h) - trilinear_point(v, a, b, c - h)) / (2 * h);
  return j;
}

double volume_oracle(const std::array<Vec3, 8>& v) {
  double vol = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        vol += kGl5w[i] * kGl5w[j] * kGl5w[k] * jacobian(v, kGl5x[i], kGl5x[j], kGl5x[k]).determinant();
  return vol;
}

std::array<Vec3, 8> random_hex(std::mt19937& rng, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::array<Vec3, 8> v;
  for (int n = 0; n < 8; ++n) v[n] = Vec3((n & 1), (n >> 1) & 1, (n >> 2) & 1) + Vec3(u(rng), u(rng), u(rng));
  return v;
}

// Face of a cell in direction d on side s, vertices in grid order.
std::array<Vec3, 4> cell_face(const std::array<Vec3, 8>& v, int d, int s) {
  const int d1 = (d + 1) % 3;
  const int d2 = (d + 2) % 3;
  std::array<Vec3, 4> f;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) {
      int idx[3];
      idx[d] = s;
      idx[d1] = a;
      idx[d2] = b;
      f[a + 2 * b] = v[idx[0] + 2 * idx[1] + 4 * idx[2]];
    }
  return f;
}

}  // namespace

TEST_CASE("unit cube face and cell") {
  std::array<Vec3, 8> v;
  for (int n = 0; n < 8; ++n) v[n] = Vec3((n & 1), (n >> 1) & 1, (n >> 2) & 1);
  const FaceGeometry f = face_normal_area(cell_face(v, 0, 1), 0);
  CHECK((f.normal - Vec3::UnitX()).norm() < 1e-15);
  CHECK(f.area == doctest::Approx(1.0));
  const VolumeCentroid vc = cell_volume_centroid(v);
  CHECK(vc.volume == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((vc.centroid - Vec3::Constant(0.5)).norm() < 1e-15);
}

TEST_CASE("planar parallelogram area") {
  const Vec3 e1(2, 0.5, 0), e2(0.3, 1.5, 0.2), o(1, 2, 3);
  const FaceGeometry f = face_normal_area({o, o + e1, o + e2, o + e1 + e2});
  CHECK(f.area == doctest::Approx(e1.cross(e2).norm()).epsilon(1e-14));
  CHECK((f.normal - e1.cross(e2).normalized()).norm() < 1e-14);
}

TEST_CASE("non-planar face matches the surface integral of the normal") {
  const double eps = 0.3;
  const std::array<Vec3, 4> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, eps)};
  Vec3 integral = Vec3::Zero();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double a = kGl5x[i], b = kGl5x[j];
      const Vec3 ra = (1 - b) * (v[1] - v[0]) + b * (v[3] - v[2]);
      const Vec3 rb = (1 - a) * (v[2] - v[0]) + a * (v[3] - v[1]);
      integral += kGl5w[i] * kGl5w[j] * ra.cross(rb);
    }
  const FaceGeometry f = face_normal_area(v);
  CHECK((f.normal * f.area - integral).norm() <= 1e-12);
}

TEST_CASE("affine cell volume equals the determinant") {
  Mat3 m;
  m << 1.2, 0.3, -0.1, 0.2, 0.9, 0.4, -0.3, 0.1, 1.5;
  const Vec3 shift(4, -2, 7);
  std::array<Vec3, 8> v;
  for (int n = 0; n < 8; ++n) v[n] = m * Vec3((n & 1), (n >> 1) & 1, (n >> 2) & 1) + shift;
  const VolumeCentroid vc = cell_volume_centroid(v);
  CHECK(vc.volume == doctest::Approx(std::abs(m.determinant())).epsilon(1e-14));
  CHECK((vc.centroid - (m * Vec3::Constant(0.5) + shift)).norm() < 1e-13);
}

TEST_CASE("random hexahedra: closed surface and volume against 5-point quadrature") {
  std::mt19937 rng(41);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_hex(rng, 0.25);
    Vec3 sum = Vec3::Zero();
    double amax = 0;
    for (int d = 0; d < 3; ++d) {
      const FaceGeometry lo = face_normal_area(cell_face(v, d, 0), d);
      const FaceGeometry hi = face_normal_area(cell_face(v, d, 1), d);
      sum += hi.normal * hi.area - lo.normal * lo.area;
      amax = std::max({amax, lo.area, hi.area});
    }
    REQUIRE(sum.norm() <= 1e-12 * amax);
    const double oracle = volume_oracle(v);
    REQUIRE(std::abs(cell_volume_centroid(v).volume - oracle) <= 1e-12 * oracle);
  }
}

TEST_CASE("inverted cell is reported") {
  const GridMapping flip = GridMapping::custom("flip", [](const Vec3& xi) { return Vec3(-xi.x(), xi.y(), xi.z()); });
  CHECK_THROWS_AS(build_grid(flip, {3, 3, 3}, 2, uniform_partition()), GridError);
}

TEST_CASE("box grids") {
  const MappedGrid g = build_grid(GridMapping::box(Vec3::Zero(), Vec3::Ones()), {10, 10, 10}, 2, uniform_partition());
  for (int k = 0; k < 10; ++k)
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 10; ++i) REQUIRE(g.volume[g.cell_index(i, j, k)] == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK((g.face(1, 3, 4, 5).normal - Vec3::UnitY()).norm() < 1e-15);
  CHECK(g.capacity[g.cell_index(0, 0, 0)] == doctest::Approx(1.0).epsilon(1e-12));

  const Mat3 r = rotation_from_angles(0.5, 0.35, 0.17).r;
  const MappedGrid gr = build_grid(GridMapping::box(2.5, r), {7, 9, 5}, 2, uniform_partition());
  CHECK(gr.interior_volume() == doctest::Approx(2.5 * 2.5 * 2.5).epsilon(1e-12));
  CHECK(max_closed_surface_residual(gr) < 1e-12);
  CHECK((gr.face(0, 2, 2, 2).normal - r.col(0)).norm() < 1e-12);
}

TEST_CASE("tilt grid is closed and its seam is smooth") {
  CHECK_NOTHROW(check_tilt_seam(0.4, 0.1));
  const MappedGrid g = build_grid(GridMapping::tilt(0.4, 0.1), {12, 12, 12}, 2, uniform_partition());
  CHECK(max_closed_surface_residual(g) < 1e-12);
  for (long long c = 0; c < g.num_cells_total(); ++c) REQUIRE(g.capacity[c] > 0);
}

TEST_CASE("undulating bed: interface on the surface, materials and axes") {
  const UndulatingBedParams bed = demo_bed();
  const int nz = 60;
  const MappedGrid g = build_grid(GridMapping::undulating(bed), {12, 12, nz}, 2, undulating_partition(bed));
  const int kint = static_cast<int>(std::lround(bed.xi_int * nz));
  for (int j = 0; j <= 12; ++j)
    for (int i = 0; i <= 12; ++i) {
      const Vec3& p = g.vertex(i, j, kint);
      REQUIRE(std::abs(p.z() - bed.surface(p.x(), p.y())) <= 1e-12);
    }
  CHECK(g.material(g.cell_index(3, 4, kint - 1)) == 0);
  CHECK(g.material(g.cell_index(3, 4, kint)) == 1);
  const long long c = g.cell_index(2, 7, 5);
  const Vec3 n = bed.surface_normal(g.centroid[c].x(), g.centroid[c].y());
  CHECK((g.instances[g.instance[c]].axes.col(2) - n).norm() < 1e-14);
  CHECK(max_closed_surface_residual(g) < 1e-12);
}

TEST_CASE("undulating bed volume matches the integrated column height") {
  const UndulatingBedParams bed = demo_bed();
  // Gauss quadrature of z(x, y, 1) - z(x, y, 0) over [0, 1]^2 in 8x8 panels.
  double exact = 0;
  const int panels = 8;
  for (int pi = 0; pi < panels; ++pi)
    for (int pj = 0; pj < panels; ++pj)
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
          const double x = (pi + kGl5x[i]) / panels, y = (pj + kGl5x[j]) / panels;
          exact += kGl5w[i] * kGl5w[j] / (panels * panels) * (bed.z_of(x, y, 1.0) - bed.z_of(x, y, 0.0));
        }
  // The cosine terms cancel exactly in the trapezoid sums over a half
  // period, so every resolution reproduces the volume.
  for (int n : {4, 8, 16}) {
    const MappedGrid g = build_grid(GridMapping::undulating(bed), {n, n, 2 * n}, 2, undulating_partition(bed));
    CHECK(g.interior_volume() == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("demo slice layer sits just below z_bot") {
  const UndulatingBedParams bed = demo_bed();
  const int nz = 600;
  const int k = demo_slice_layer(bed, nz);
  CHECK(k == 89);
  const double zc = bed.z_of(0.3, 0.7, (k + 0.5) / nz);
  CHECK(std::abs(zc - (-1.0014)) < 5e-5);
}
