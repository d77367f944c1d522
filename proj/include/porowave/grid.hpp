#pragma once

#include <array>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "porowave/materials.hpp"
#include "porowave/types.hpp"

namespace porowave {

struct FaceGeometry {
  Vec3 normal = Vec3::UnitX();
  double area = 0;
};

// Vertices ordered (r11, r21, r12, r22): the first index runs along the
// first in-face computational direction, the second along the second.
FaceGeometry face_normal_area(const std::array<Vec3, 4>& v, int placeholder_dir = 0);

struct VolumeCentroid {
  double volume = 0;
  Vec3 centroid = Vec3::Zero();
};

// Vertices indexed a + 2b + 4c with a, b, c in {0, 1} along xi1, xi2, xi3.
VolumeCentroid cell_volume_centroid(const std::array<Vec3, 8>& v);

struct UndulatingBedParams {
  double z0 = 0.0;
  double lx = 2.0;
  double ly = 2.0;
  double hx = 3.0 * 2.0 / (16.0 * std::numbers::pi);
  double hy = 3.0 * 2.0 / (16.0 * std::numbers::pi);
  double z_bot = -1.0;
  double z_top = 0.5;
  double xi_bot = 0.15;
  double xi_int = 0.6;
  double xi_top = 0.9;
  double r_bot = 2.0 / 0.15;
  double r_top = 2.0 / (1.0 - 0.9);

  double surface(double x, double y) const;       // z_int(x, y)
  Vec3 surface_normal(double x, double y) const;  // upward unit normal
  double z_of(double x, double y, double xi3) const;
};

enum class MappingKind { Box, Tilt, UndulatingBed, Custom };

class GridMapping {
 public:
  using Fn = std::function<Vec3(const Vec3&)>;

  // Cube of edge `edge` centered at `center`, rotated by `rotation` about its center.
  static GridMapping box(double edge, const Mat3& rotation = Mat3::Identity(),
                         const Vec3& center = Vec3::Zero());
  static GridMapping box(const Vec3& lower, const Vec3& extent);
  static GridMapping tilt(double length, double sigma);
  static GridMapping undulating(const UndulatingBedParams& params);
  static GridMapping custom(std::string name, Fn fn);

  Vec3 operator()(const Vec3& xi) const { return fn_(xi); }
  MappingKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const UndulatingBedParams& bed() const { return bed_; }
  double tilt_sigma() const { return sigma_; }
  double length() const { return length_; }

 private:
  MappingKind kind_ = MappingKind::Custom;
  std::string name_;
  Fn fn_;
  UndulatingBedParams bed_{};
  double sigma_ = 0;
  double length_ = 0;
};

// Throws GridError when the two tilt branches or their first two xi3
// derivatives disagree across xi3 = 0 by more than tol * length.
void check_tilt_seam(double length, double sigma, double tol = 1e-10);

struct CellMaterial {
  int material = 0;
  Mat3 axes = Mat3::Identity();
};

// Called with the computational center (xi of the cell midpoint) and the
// physical centroid of each cell.
using MaterialPartition = std::function<CellMaterial(const Vec3& xi_center, const Vec3& centroid)>;

MaterialPartition uniform_partition(int material = 0, const Mat3& axes = Mat3::Identity());
// Poroelastic (material 0) below xi_int with axes from the local surface
// normal; fluid (material 1) above.
MaterialPartition undulating_partition(const UndulatingBedParams& params);

class MappedGrid {
 public:
  std::array<int, 3> dims{};
  int ghost = 2;
  std::array<int, 3> ext{};  // dims + 2 ghost
  GridMapping mapping;

  // Cells over the extended range [-ghost, dims + ghost).
  std::vector<double> volume;
  std::vector<double> capacity;
  std::vector<Vec3> centroid;
  std::vector<int> instance;  // index into instances
  std::vector<CellMaterial> instances;

  // faces[d] holds the face on the low side of each extended cell index plus
  // one extra layer at the top; face (i,j,k) in direction d separates cell
  // (i,j,k) - e_d and (i,j,k).
  std::array<std::vector<FaceGeometry>, 3> faces;
  std::array<std::array<int, 3>, 3> face_ext{};

  std::vector<Vec3> vertices;  // over [-ghost, dims + ghost]

  long long num_cells_total() const { return static_cast<long long>(ext[0]) * ext[1] * ext[2]; }
  long long cell_index(int i, int j, int k) const {
    return (static_cast<long long>(k + ghost) * ext[1] + (j + ghost)) * ext[0] + (i + ghost);
  }
  long long face_index(int d, int i, int j, int k) const {
    const auto& e = face_ext[d];
    return (static_cast<long long>(k + ghost) * e[1] + (j + ghost)) * e[0] + (i + ghost);
  }
  const FaceGeometry& face(int d, int i, int j, int k) const { return faces[d][face_index(d, i, j, k)]; }
  long long vertex_index(int i, int j, int k) const {
    return (static_cast<long long>(k + ghost) * (ext[1] + 1) + (j + ghost)) * (ext[0] + 1) + (i + ghost);
  }
  const Vec3& vertex(int i, int j, int k) const { return vertices[vertex_index(i, j, k)]; }
  std::array<Vec3, 8> cell_vertices(int i, int j, int k) const;
  bool is_interior(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims[0] && j < dims[1] && k < dims[2];
  }
  int material(long long cell) const { return instances[instance[cell]].material; }
  double interior_volume() const;
};

MappedGrid build_grid(const GridMapping& mapping, const std::array<int, 3>& dims, int ghost,
                      const MaterialPartition& partition);

// Largest per-cell closed-surface residual |sum of outward n A| / max face area.
double max_closed_surface_residual(const MappedGrid& grid);

}  // namespace porowave
