#include "porowave/grid.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <unordered_map>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 trilinear(const std::array<Vec3, 8>& v, const Vec3& eta) {
  Vec3 r = Vec3::Zero();
  for (int c = 0; c < 2; ++c) {
    const double wc = c ? eta.z() : 1.0 - eta.z();
    for (int b = 0; b < 2; ++b) {
      const double wb = b ? eta.y() : 1.0 - eta.y();
      for (int a = 0; a < 2; ++a) {
        const double wa = a ? eta.x() : 1.0 - eta.x();
        r += wa * wb * wc * v[a + 2 * b + 4 * c];
      }
    }
  }
  return r;
}

Mat3 trilinear_jacobian(const std::array<Vec3, 8>& v, const Vec3& eta) {
  Mat3 j = Mat3::Zero();
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        const Vec3& p = v[a + 2 * b + 4 * c];
        const double w[3] = {a ? eta.x() : 1.0 - eta.x(), b ? eta.y() : 1.0 - eta.y(),
                             c ? eta.z() : 1.0 - eta.z()};
        const double dw[3] = {a ? 1.0 : -1.0, b ? 1.0 : -1.0, c ? 1.0 : -1.0};
        j.col(0) += dw[0] * w[1] * w[2] * p;
        j.col(1) += w[0] * dw[1] * w[2] * p;
        j.col(2) += w[0] * w[1] * dw[2] * p;
      }
    }
  }
  return j;
}

}  // namespace

FaceGeometry face_normal_area(const std::array<Vec3, 4>& v, int placeholder_dir) {
  const Vec3 a = 0.5 * (v[1] + v[3]) - 0.5 * (v[0] + v[2]);
  const Vec3 b = 0.5 * (v[2] + v[3]) - 0.5 * (v[0] + v[1]);
  const Vec3 na = a.cross(b);
  FaceGeometry f;
  f.area = na.norm();
  if (f.area > 0) {
    f.normal = na / f.area;
  } else {
    f.normal = Vec3::Unit(placeholder_dir);
  }
  return f;
}

VolumeCentroid cell_volume_centroid(const std::array<Vec3, 8>& v) {
  const double g = 0.5 / std::sqrt(3.0);
  const double pts[2] = {0.5 - g, 0.5 + g};
  VolumeCentroid out;
  Vec3 moment = Vec3::Zero();
  for (double z : pts) {
    for (double y : pts) {
      for (double x : pts) {
        const Vec3 eta(x, y, z);
        const double jac = trilinear_jacobian(v, eta).determinant() / 8.0;
        out.volume += jac;
        moment += jac * trilinear(v, eta);
      }
    }
  }
  out.centroid = out.volume != 0 ? Vec3(moment / out.volume) : trilinear(v, Vec3::Constant(0.5));
  return out;
}

double UndulatingBedParams::surface(double x, double y) const {
  return z0 + hx * std::cos(kTwoPi * x / lx) + hy * std::cos(kTwoPi * y / ly);
}

Vec3 UndulatingBedParams::surface_normal(double x, double y) const {
  const double gx = -hx * (kTwoPi / lx) * std::sin(kTwoPi * x / lx);
  const double gy = -hy * (kTwoPi / ly) * std::sin(kTwoPi * y / ly);
  return Vec3(-gx, -gy, 1.0).normalized();
}

double UndulatingBedParams::z_of(double x, double y, double xi3) const {
  const double low = z0 - hx - hy;
  const double high = z0 + hx + hy;
  const double zpb = (low - z_bot) / (xi_int - xi_bot);
  const double zpt = (z_top - high) / (xi_top - xi_int);
  auto b = [&](double xs) {
    const double t = (xi3 - xs) / (xi_int - xs);
    return 0.5 * (std::sqrt(1.0 + 8.0 * t * t) - 1.0);
  };
  if (xi3 < xi_bot) return z_bot + zpb / r_bot * std::sinh(r_bot * (xi3 - xi_bot));
  const double zi = surface(x, y);
  if (xi3 < xi_int) return z_bot + zpb * (xi3 - xi_bot) + (zi - low) * b(xi_bot);
  if (xi3 < xi_top) return z_top + zpt * (xi3 - xi_top) + (zi - high) * b(xi_top);
  return z_top + zpt / r_top * std::sinh(r_top * (xi3 - xi_top));
}

GridMapping GridMapping::box(double edge, const Mat3& rotation, const Vec3& center) {
  GridMapping m;
  m.kind_ = MappingKind::Box;
  m.name_ = "box";
  m.length_ = edge;
  m.fn_ = [edge, rotation, center](const Vec3& xi) -> Vec3 {
    return center + rotation * ((xi - Vec3::Constant(0.5)) * edge);
  };
  return m;
}

GridMapping GridMapping::box(const Vec3& lower, const Vec3& extent) {
  GridMapping m;
  m.kind_ = MappingKind::Box;
  m.name_ = "box";
  m.length_ = extent.maxCoeff();
  m.fn_ = [lower, extent](const Vec3& xi) -> Vec3 { return lower + xi.cwiseProduct(extent); };
  return m;
}

GridMapping GridMapping::tilt(double length, double sigma) {
  check_tilt_seam(length, sigma);
  GridMapping m;
  m.kind_ = MappingKind::Tilt;
  m.name_ = "tilt";
  m.length_ = length;
  m.sigma_ = sigma;
  m.fn_ = [length, sigma](const Vec3& xi) -> Vec3 {
    const Vec3 c = 2.0 * xi - Vec3::Ones();
    const double h = 0.5 * length;
    const double s3 = c.z() * c.z() * c.z();
    const double z = c.z() < 0 ? c.z() + sigma * c.x() * s3 : c.z() + sigma * c.y() * s3;
    return Vec3(c.x() * h, c.y() * h, z * h);
  };
  return m;
}

GridMapping GridMapping::undulating(const UndulatingBedParams& p) {
  GridMapping m;
  m.kind_ = MappingKind::UndulatingBed;
  m.name_ = "undulating-bed";
  m.bed_ = p;
  m.length_ = p.z_top - p.z_bot;
  m.fn_ = [p](const Vec3& xi) -> Vec3 {
    const double x = xi.x() * p.lx / 2.0;
    const double y = xi.y() * p.ly / 2.0;
    return Vec3(x, y, p.z_of(x, y, xi.z()));
  };
  return m;
}

GridMapping GridMapping::custom(std::string name, Fn fn) {
  GridMapping m;
  m.kind_ = MappingKind::Custom;
  m.name_ = std::move(name);
  m.fn_ = std::move(fn);
  return m;
}

void check_tilt_seam(double length, double sigma, double tol) {
  const double h = 1e-5;
  auto lower = [&](double x1, double x3) { return (x3 + sigma * x1 * x3 * x3 * x3) * length / 2; };
  auto upper = [&](double x2, double x3) { return (x3 + sigma * x2 * x3 * x3 * x3) * length / 2; };
  const double samples[] = {-1.0, -0.37, 0.0, 0.52, 1.0};
  for (double a : samples) {
    for (double b : samples) {
      const double d0 = lower(a, 0) - upper(b, 0);
      const double d1 = (lower(a, h) - lower(a, -h)) / (2 * h) - (upper(b, h) - upper(b, -h)) / (2 * h);
      const double d2 = (lower(a, h) - 2 * lower(a, 0) + lower(a, -h)) / (h * h) -
                        (upper(b, h) - 2 * upper(b, 0) + upper(b, -h)) / (h * h);
      const double worst = std::max({std::abs(d0), std::abs(d1), std::abs(d2)});
      if (worst > tol * std::max(1.0, length)) {
        std::ostringstream os;
        os << "tilt map is not C2 across xi3 = 0 (mismatch " << worst << ")";
        throw GridError(os.str());
      }
    }
  }
}

MaterialPartition uniform_partition(int material, const Mat3& axes) {
  return [material, axes](const Vec3&, const Vec3&) { return CellMaterial{material, axes}; };
}

MaterialPartition undulating_partition(const UndulatingBedParams& p) {
  return [p](const Vec3& xi, const Vec3& centroid) {
    if (xi.z() < p.xi_int) {
      const Vec3 n = p.surface_normal(centroid.x(), centroid.y());
      return CellMaterial{0, rotation_from_surface_normal(n).r};
    }
    return CellMaterial{1, Mat3::Identity()};
  };
}

std::array<Vec3, 8> MappedGrid::cell_vertices(int i, int j, int k) const {
  std::array<Vec3, 8> v;
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) v[a + 2 * b + 4 * c] = vertex(i + a, j + b, k + c);
  return v;
}

double MappedGrid::interior_volume() const {
  double total = 0;
  for (int k = 0; k < dims[2]; ++k)
    for (int j = 0; j < dims[1]; ++j)
      for (int i = 0; i < dims[0]; ++i) total += volume[cell_index(i, j, k)];
  return total;
}

MappedGrid build_grid(const GridMapping& mapping, const std::array<int, 3>& dims, int ghost,
                      const MaterialPartition& partition) {
  for (int d = 0; d < 3; ++d) {
    if (dims[d] < 1) throw GridError("grid dimensions must be positive");
  }
  if (ghost < 0) throw GridError("ghost width must be non-negative");
  MappedGrid g;
  g.dims = dims;
  g.ghost = ghost;
  g.mapping = mapping;
  for (int d = 0; d < 3; ++d) g.ext[d] = dims[d] + 2 * ghost;

  const Vec3 dxi(1.0 / dims[0], 1.0 / dims[1], 1.0 / dims[2]);
  g.vertices.resize(static_cast<size_t>(g.ext[0] + 1) * (g.ext[1] + 1) * (g.ext[2] + 1));
  for (int k = -ghost; k <= dims[2] + ghost; ++k)
    for (int j = -ghost; j <= dims[1] + ghost; ++j)
      for (int i = -ghost; i <= dims[0] + ghost; ++i) {
        const Vec3 xi(i * dxi.x(), j * dxi.y(), k * dxi.z());
        g.vertices[g.vertex_index(i, j, k)] = mapping(xi);
      }

  const long long ncell = g.num_cells_total();
  g.volume.resize(ncell);
  g.capacity.resize(ncell);
  g.centroid.resize(ncell);
  g.instance.resize(ncell);
  const double dvol = dxi.x() * dxi.y() * dxi.z();

  std::unordered_map<std::string, int> lookup;
  for (int k = -ghost; k < dims[2] + ghost; ++k)
    for (int j = -ghost; j < dims[1] + ghost; ++j)
      for (int i = -ghost; i < dims[0] + ghost; ++i) {
        const long long c = g.cell_index(i, j, k);
        const VolumeCentroid vc = cell_volume_centroid(g.cell_vertices(i, j, k));
        if (!(vc.volume > 0)) {
          std::ostringstream os;
          os << "inverted cell at index (" << i << ", " << j << ", " << k << "), volume " << vc.volume;
          throw GridError(os.str());
        }
        g.volume[c] = vc.volume;
        g.capacity[c] = vc.volume / dvol;
        g.centroid[c] = vc.centroid;
        const Vec3 xi_center((i + 0.5) * dxi.x(), (j + 0.5) * dxi.y(), (k + 0.5) * dxi.z());
        const CellMaterial cm = partition(xi_center, vc.centroid);
        std::string key(sizeof(int) + 9 * sizeof(double), '\0');
        std::memcpy(key.data(), &cm.material, sizeof(int));
        std::memcpy(key.data() + sizeof(int), cm.axes.data(), 9 * sizeof(double));
        auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(g.instances.size()));
        if (inserted) g.instances.push_back(cm);
        g.instance[c] = it->second;
      }

  for (int d = 0; d < 3; ++d) {
    g.face_ext[d] = g.ext;
    g.face_ext[d][d] += 1;
    g.faces[d].resize(static_cast<size_t>(g.face_ext[d][0]) * g.face_ext[d][1] * g.face_ext[d][2]);
    const int d1 = (d + 1) % 3;
    const int d2 = (d + 2) % 3;
    std::array<int, 3> hi = {dims[0] + ghost, dims[1] + ghost, dims[2] + ghost};
    hi[d] += 1;
    for (int k = -ghost; k < hi[2]; ++k)
      for (int j = -ghost; j < hi[1]; ++j)
        for (int i = -ghost; i < hi[0]; ++i) {
          std::array<Vec3, 4> fv;
          for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a) {
              std::array<int, 3> idx = {i, j, k};
              idx[d1] += a;
              idx[d2] += b;
              fv[a + 2 * b] = g.vertex(idx[0], idx[1], idx[2]);
            }
          g.faces[d][g.face_index(d, i, j, k)] = face_normal_area(fv, d);
        }
  }
  return g;
}

double max_closed_surface_residual(const MappedGrid& g) {
  double worst = 0;
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        Vec3 sum = Vec3::Zero();
        double amax = 0;
        for (int d = 0; d < 3; ++d) {
          std::array<int, 3> up = {i, j, k};
          up[d] += 1;
          const FaceGeometry& lo = g.face(d, i, j, k);
          const FaceGeometry& hi = g.face(d, up[0], up[1], up[2]);
          sum += hi.normal * hi.area - lo.normal * lo.area;
          amax = std::max({amax, lo.area, hi.area});
        }
        if (amax > 0) worst = std::max(worst, sum.norm() / amax);
      }
  return worst;
}

}  // namespace porowave
