#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "porowave/grid.hpp"
#include "porowave/limiter.hpp"
#include "porowave/materials.hpp"
#include "porowave/riemann.hpp"
#include "porowave/system.hpp"

namespace porowave {

enum class BoundaryKind { AnalyticFill, ReflectX, ReflectY, Extrapolate0 };

// Face order: x-, x+, y-, y+, z-, z+ (computational directions 1, 2, 3).
struct BoundarySpec {
  std::array<BoundaryKind, 6> faces{BoundaryKind::Extrapolate0, BoundaryKind::Extrapolate0,
                                    BoundaryKind::Extrapolate0, BoundaryKind::Extrapolate0,
                                    BoundaryKind::Extrapolate0, BoundaryKind::Extrapolate0};
  std::function<State(const Vec3& x, double t)> analytic;

  static BoundarySpec uniform(BoundaryKind kind) {
    BoundarySpec b;
    b.faces.fill(kind);
    return b;
  }
};

// Components negated by the reflective conditions.
inline constexpr std::array<int, 4> kReflectXNegated = {var::kTau13, var::kTau12, var::kV1, var::kQ1};
inline constexpr std::array<int, 4> kReflectYNegated = {var::kTau23, var::kTau12, var::kV2, var::kQ2};

struct StateField {
  std::vector<State> q;  // extended cells, MappedGrid::cell_index order
  double t = 0;
};

struct SolverOptions {
  LimiterChoice limiter;
  bool second_order = true;
  double cfl_target = 0.9;
  // eta_d at interfaces between different poroelastic materials and at
  // poroelastic/fluid interfaces.
  double discharge_efficiency = 1.0;
  // Maximum number of cached face eigenbases; faces beyond it are
  // decomposed on every use.
  std::size_t basis_cache_budget = 1'000'000;
  // Factored interface systems kept between steps (about 1.6 kB each).
  std::size_t interface_cache_budget = 1'000'000;
  std::array<int, 3> sweep_order = {0, 1, 2};
};

class Solver {
 public:
  // materials[id] backs CellMaterial::material == id.
  Solver(const MappedGrid& grid, std::vector<std::shared_ptr<const Material>> materials,
         BoundarySpec boundary, SolverOptions options);

  const MappedGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }
  const BoundarySpec& boundary() const { return boundary_; }
  const MaterialSpec& instance_spec(int inst) const { return specs_[inst]; }

  StateField make_state() const;
  // Sets every cell, ghosts included, to f(centroid).
  void initialize(StateField& s, const std::function<State(const Vec3&)>& f) const;

  // Largest dt with CFL number cfl_target.
  double compute_dt() const;
  double max_inverse_length_speed() const { return max_rate_; }
  double cfl_number(double dt) const { return dt * max_rate_; }

  void fill_ghosts(StateField& s, double t) const;
  // Exact integration of the viscous source over dt in every cell.
  void source_step(StateField& s, double dt) const;
  void sweep_1d(StateField& s, int d, double dt) const;
  // source(dt/2), sweeps, source(dt/2); ghosts are filled at the start.
  void strang_step(StateField& s, double dt);
  // Runs to t_end with a fixed step no larger than compute_dt(). The
  // callback, when given, is invoked after every step with the step number.
  int advance(StateField& s, double t_end,
              const std::function<void(int, const StateField&)>& after_step = nullptr);

  // Sum over interior cells of V * 0.5 Q^T E Q.
  double total_energy(const StateField& s) const;
  double energy_density(long long cell, const State& q) const;
  // Sum over interior cells of V * (rho v + rho_f q), poroelastic cells only.
  Vec3 total_momentum(const StateField& s) const;

  std::size_t cached_bases() const { return table_.size(); }
  std::size_t cached_interfaces() const { return interfaces_.size(); }
  int steps_taken() const { return step_count_; }

 private:
  struct InstanceData {
    EnergyOperator energy;
    Mat13 energy_global = Mat13::Zero();
    bool fluid = false;
    bool viscous = false;
    Vec3 decay_rate = Vec3::Zero();  // 1/tau_d per principal axis
    double density_ratio = 0;         // rho_f / rho
  };

  struct FaceResult {
    WaveSet waves;
    bool correct = true;
  };

  const EigenBasis& face_basis(int d, long long face, int inst, EigenBasis& scratch) const;
  InterfaceSpec interface_spec(int il, int ir) const;
  FaceResult solve_face(int d, long long face, long long cl, long long cr, const State& ql,
                        const State& qr) const;
  void build_basis_table();
  void check_finite(const StateField& s) const;

  const MappedGrid& grid_;
  std::vector<std::shared_ptr<const Material>> materials_;
  BoundarySpec boundary_;
  SolverOptions options_;
  std::vector<MaterialSpec> specs_;
  std::vector<InstanceData> inst_;
  // Per face: index into table_ (same instance on both sides) or into
  // interfaces_ (different instances); -1 when not cached.
  std::array<std::vector<std::int32_t>, 3> face_table_;
  std::vector<EigenBasis> table_;
  std::vector<InterfaceSystem> interfaces_;
  double max_rate_ = 0;  // max over cells and directions of s_max * A / V
  int step_count_ = 0;
};

}  // namespace porowave
