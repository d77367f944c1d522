#pragma once

#include <string>
#include <vector>

#include "porowave/solver.hpp"

namespace porowave {

// Legacy VTK ASCII structured grid whose points are the interior cell
// centroids, carrying the 13 state fields, the energy density e and the
// material id.
void write_vtk_snapshot(const std::string& path, const Solver& solver, const StateField& state);

// One plane of interior cells normal to computational direction `axis`.
// Columns: i, j, k, x, y, z, the 13 fields, e, material.
void write_csv_slice(const std::string& path, const Solver& solver, const StateField& state, int axis,
                     int index);

struct ReportRow {
  std::string case_label;
  int n = 0;
  std::string norm;
  double value = 0;
  double rate = 0;
  bool has_rate = false;
};

// Columns case, N, norm, value, rate (rate empty when not fitted).
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

}  // namespace porowave
