#include "porowave/output.hpp"

#include <fstream>
#include <iomanip>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

void close_or_throw(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw Error("write to " + path + " failed");
}

}  // namespace

void write_vtk_snapshot(const std::string& path, const Solver& solver, const StateField& state) {
  const MappedGrid& g = solver.grid();
  std::ofstream out = open_or_throw(path);
  const long long npts = static_cast<long long>(g.dims[0]) * g.dims[1] * g.dims[2];
  out << "# vtk DataFile Version 3.0\n";
  out << "porowave snapshot t=" << state.t << "\n";
  out << "ASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << g.dims[0] << " " << g.dims[1] << " " << g.dims[2] << "\n";
  out << "POINTS " << npts << " double\n";
  auto for_each = [&](auto&& fn) {
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) fn(g.cell_index(i, j, k));
  };
  for_each([&](long long c) {
    const Vec3& x = g.centroid[c];
    out << x.x() << " " << x.y() << " " << x.z() << "\n";
  });
  out << "POINT_DATA " << npts << "\n";
  for (int v = 0; v < kNumVars; ++v) {
    out << "SCALARS " << kFieldNames[v] << " double 1\nLOOKUP_TABLE default\n";
    for_each([&](long long c) { out << state.q[c][v] << "\n"; });
  }
  out << "SCALARS e double 1\nLOOKUP_TABLE default\n";
  for_each([&](long long c) { out << solver.energy_density(c, state.q[c]) << "\n"; });
  out << "SCALARS material int 1\nLOOKUP_TABLE default\n";
  for_each([&](long long c) { out << g.material(c) << "\n"; });
  close_or_throw(out, path);
}

void write_csv_slice(const std::string& path, const Solver& solver, const StateField& state, int axis,
                     int index) {
  const MappedGrid& g = solver.grid();
  if (axis < 0 || axis > 2 || index < 0 || index >= g.dims[axis]) {
    throw Error("slice outside the grid");
  }
  std::ofstream out = open_or_throw(path);
  out << "i,j,k,x,y,z";
  for (auto name : kFieldNames) out << "," << name;
  out << ",e,material\n";
  std::array<int, 3> lo = {0, 0, 0};
  std::array<int, 3> hi = g.dims;
  lo[axis] = index;
  hi[axis] = index + 1;
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        const long long c = g.cell_index(i, j, k);
        const Vec3& x = g.centroid[c];
        out << i << "," << j << "," << k << "," << x.x() << "," << x.y() << "," << x.z();
        for (int v = 0; v < kNumVars; ++v) out << "," << state.q[c][v];
        out << "," << solver.energy_density(c, state.q[c]) << "," << g.material(c) << "\n";
      }
  close_or_throw(out, path);
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
  std::ofstream out = open_or_throw(path);
  out << "# norms: volume-weighted relative errors over all 13 components stacked\n";
  out << "case,N,norm,value,rate\n";
  for (const ReportRow& r : rows) {
    out << r.case_label << "," << r.n << "," << r.norm << "," << r.value << ",";
    if (r.has_rate) out << r.rate;
    out << "\n";
  }
  close_or_throw(out, path);
}

}  // namespace porowave
