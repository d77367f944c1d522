#include "porowave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

struct BasisKey {
  int inst;
  std::array<long long, 3> n;
  bool operator==(const BasisKey& o) const { return inst == o.inst && n == o.n; }
};

struct BasisKeyHash {
  std::size_t operator()(const BasisKey& k) const {
    std::size_t h = std::hash<int>()(k.inst);
    for (long long v : k.n) h = h * 1000003u ^ std::hash<long long>()(v);
    return h;
  }
};

BasisKey make_key(int inst, const Vec3& n) {
  constexpr double kQuantum = 1e12;
  return {inst, {std::llround(n.x() * kQuantum), std::llround(n.y() * kQuantum), std::llround(n.z() * kQuantum)}};
}

std::array<int, 3> unit_offset(int d) {
  std::array<int, 3> o = {0, 0, 0};
  o[d] = 1;
  return o;
}

}  // namespace

Solver::Solver(const MappedGrid& grid, std::vector<std::shared_ptr<const Material>> materials,
               BoundarySpec boundary, SolverOptions options)
    : grid_(grid), materials_(std::move(materials)), boundary_(std::move(boundary)), options_(options) {
  if (grid_.ghost < 2) throw SolverError("solver needs at least 2 ghost layers");
  if (!(options_.cfl_target > 0)) throw SolverError("cfl_target must be positive");
  {
    std::array<int, 3> order = options_.sweep_order;
    std::sort(order.begin(), order.end());
    if (order != std::array<int, 3>{0, 1, 2}) throw SolverError("sweep_order must be a permutation of 0, 1, 2");
  }
  for (BoundaryKind k : boundary_.faces) {
    if (k == BoundaryKind::AnalyticFill && !boundary_.analytic) {
      throw ConfigError("AnalyticFill boundary without an analytic solution");
    }
  }
  specs_.reserve(grid_.instances.size());
  inst_.reserve(grid_.instances.size());
  for (const CellMaterial& cm : grid_.instances) {
    if (cm.material < 0 || cm.material >= static_cast<int>(materials_.size()) || !materials_[cm.material]) {
      std::ostringstream os;
      os << "no material registered for id " << cm.material;
      throw ConfigError(os.str());
    }
    MaterialSpec spec;
    spec.material = materials_[cm.material];
    spec.axes.r = cm.axes;
    spec.id = cm.material;
    specs_.push_back(spec);

    InstanceData d;
    d.energy.energy = &spec.material->energy();
    d.energy.axes = cm.axes;
    d.fluid = spec.material->is_fluid();
    if (!d.fluid && spec.material->derived().dissipation_time) {
      const Vec3 tau = *spec.material->derived().dissipation_time;
      d.viscous = true;
      d.decay_rate = tau.cwiseInverse();
      d.density_ratio = spec.material->base().fluid_density / spec.material->derived().density;
    }
    d.energy_global = energy_global(spec.material->energy(), cm.axes);
    inst_.push_back(d);
  }
  for (InstanceData& d : inst_) d.energy.global = &d.energy_global;
  build_basis_table();
}

void Solver::build_basis_table() {
  std::unordered_map<BasisKey, std::int32_t, BasisKeyHash> index;
  std::array<std::vector<double>, 3> face_speed;
  EigenBasis scratch_l, scratch_r;

  const int g = grid_.ghost;
  for (int d = 0; d < 3; ++d) {
    face_table_[d].assign(grid_.faces[d].size(), -1);
    face_speed[d].assign(grid_.faces[d].size(), 0.0);
    const auto o = unit_offset(d);
    std::array<int, 3> lo = {-g, -g, -g};
    std::array<int, 3> hi = {grid_.dims[0] + g, grid_.dims[1] + g, grid_.dims[2] + g};
    lo[d] = -g + 1;  // both adjacent cells must exist
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          const long long f = grid_.face_index(d, i, j, k);
          const int il = grid_.instance[grid_.cell_index(i - o[0], j - o[1], k - o[2])];
          const int ir = grid_.instance[grid_.cell_index(i, j, k)];
          const Vec3& n = grid_.faces[d][f].normal;
          if (il == ir) {
            // Fluid bases are closed-form and cheap; only solids are cached.
            const BasisKey key = make_key(il, n);
            auto it = index.find(key);
            if (it != index.end()) {
              face_table_[d][f] = it->second;
              face_speed[d][f] = table_[it->second].max_speed();
              continue;
            }
            scratch_l = eigendecompose(specs_[il], n);
            face_speed[d][f] = scratch_l.max_speed();
            if (!inst_[il].fluid && table_.size() < options_.basis_cache_budget) {
              table_.push_back(scratch_l);
              const auto id = static_cast<std::int32_t>(table_.size() - 1);
              index.emplace(key, id);
              face_table_[d][f] = id;
            }
          } else {
            scratch_l = eigendecompose(specs_[il], n);
            scratch_r = eigendecompose(specs_[ir], n);
            face_speed[d][f] = std::max(scratch_l.max_speed(), scratch_r.max_speed());
            InterfaceSystem sys = factor_interface(scratch_l, scratch_r, interface_spec(il, ir), f);
            if (interfaces_.size() < options_.interface_cache_budget) {
              interfaces_.push_back(std::move(sys));
              face_table_[d][f] = static_cast<std::int32_t>(interfaces_.size() - 1);
            }
          }
        }
  }

  max_rate_ = 0;
  for (int k = 0; k < grid_.dims[2]; ++k)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int i = 0; i < grid_.dims[0]; ++i) {
        const double v = grid_.volume[grid_.cell_index(i, j, k)];
        for (int d = 0; d < 3; ++d) {
          const auto o = unit_offset(d);
          const long long flo = grid_.face_index(d, i, j, k);
          const long long fhi = grid_.face_index(d, i + o[0], j + o[1], k + o[2]);
          const double s = std::max(face_speed[d][flo], face_speed[d][fhi]);
          const double a = std::max(grid_.faces[d][flo].area, grid_.faces[d][fhi].area);
          max_rate_ = std::max(max_rate_, s * a / v);
        }
      }
}

StateField Solver::make_state() const {
  StateField s;
  s.q.assign(grid_.num_cells_total(), State::Zero());
  return s;
}

void Solver::initialize(StateField& s, const std::function<State(const Vec3&)>& f) const {
  s.q.resize(grid_.num_cells_total());
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < grid_.num_cells_total(); ++c) s.q[c] = f(grid_.centroid[c]);
}

double Solver::compute_dt() const {
  if (!(max_rate_ > 0)) throw SolverError("no wave speed found on the grid");
  return options_.cfl_target / max_rate_;
}

void Solver::fill_ghosts(StateField& s, double t) const {
  const int g = grid_.ghost;
  const auto& dims = grid_.dims;
  // Direction d covers the interior range of later directions and the full
  // extended range of earlier ones, so corners copy already-filled ghosts.
  for (int d = 0; d < 3; ++d) {
    std::array<int, 3> lo{}, hi{};
    for (int e = 0; e < 3; ++e) {
      lo[e] = e < d ? -g : 0;
      hi[e] = e < d ? dims[e] + g : dims[e];
    }
    const int e1 = (d + 1) % 3;
    const int e2 = (d + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      const BoundaryKind kind = boundary_.faces[2 * d + side];
      for (int b = lo[e2]; b < hi[e2]; ++b)
        for (int a = lo[e1]; a < hi[e1]; ++a)
          for (int layer = 1; layer <= g; ++layer) {
            std::array<int, 3> gi{}, src{};
            gi[e1] = src[e1] = a;
            gi[e2] = src[e2] = b;
            gi[d] = side == 0 ? -layer : dims[d] - 1 + layer;
            const long long gc = grid_.cell_index(gi[0], gi[1], gi[2]);
            switch (kind) {
              case BoundaryKind::AnalyticFill:
                s.q[gc] = boundary_.analytic(grid_.centroid[gc], t);
                break;
              case BoundaryKind::Extrapolate0:
                src[d] = side == 0 ? 0 : dims[d] - 1;
                s.q[gc] = s.q[grid_.cell_index(src[0], src[1], src[2])];
                break;
              case BoundaryKind::ReflectX:
              case BoundaryKind::ReflectY: {
                src[d] = side == 0 ? layer - 1 : dims[d] - layer;
                State q = s.q[grid_.cell_index(src[0], src[1], src[2])];
                const auto& neg = kind == BoundaryKind::ReflectX ? kReflectXNegated : kReflectYNegated;
                for (int c : neg) q[c] = -q[c];
                s.q[gc] = q;
                break;
              }
            }
          }
    }
  }
}

void Solver::source_step(StateField& s, double dt) const {
  const long long n = grid_.num_cells_total();
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < n; ++c) {
    const InstanceData& d = inst_[grid_.instance[c]];
    if (!d.viscous) continue;
    const Mat3& r = d.energy.axes;
    State& q = s.q[c];
    const Vec3 v = r.transpose() * q.segment<3>(var::kV1);
    const Vec3 w = r.transpose() * q.segment<3>(var::kQ1);
    Vec3 v_new, w_new;
    for (int i = 0; i < 3; ++i) {
      const double e = std::exp(-d.decay_rate[i] * dt);
      w_new[i] = w[i] * e;
      v_new[i] = v[i] + d.density_ratio * w[i] * (1.0 - e);
    }
    q.segment<3>(var::kV1) = r * v_new;
    q.segment<3>(var::kQ1) = r * w_new;
  }
}

const EigenBasis& Solver::face_basis(int d, long long face, int inst, EigenBasis& scratch) const {
  const std::int32_t id = face_table_[d][face];
  if (id >= 0) return table_[id];
  scratch = eigendecompose(specs_[inst], grid_.faces[d][face].normal);
  return scratch;
}

InterfaceSpec Solver::interface_spec(int il, int ir) const {
  const Material& ml = *specs_[il].material;
  const Material& mr = *specs_[ir].material;
  InterfaceSpec is;
  is.discharge_efficiency = specs_[il].id == specs_[ir].id ? 1.0 : options_.discharge_efficiency;
  if (!ml.is_fluid() && !mr.is_fluid()) {
    is.kind = InterfaceKind::PoroPoro;
    is.fluid_impedance = ml.fluid_impedance();
  } else if (!ml.is_fluid() && mr.is_fluid()) {
    is.kind = InterfaceKind::PoroFluid;
    is.fluid_impedance = mr.fluid_impedance();
  } else if (ml.is_fluid() && !mr.is_fluid()) {
    is.kind = InterfaceKind::FluidPoro;
    is.fluid_impedance = ml.fluid_impedance();
  } else {
    throw RiemannError("interfaces between two different fluids are not supported");
  }
  return is;
}

Solver::FaceResult Solver::solve_face(int d, long long face, long long cl, long long cr, const State& ql,
                                      const State& qr) const {
  FaceResult out;
  const int il = grid_.instance[cl];
  const int ir = grid_.instance[cr];
  if (il == ir) {
    EigenBasis scratch;
    out.waves = solve_same_material(ql, qr, face_basis(d, face, il, scratch));
  } else {
    const std::int32_t id = face_table_[d][face];
    if (id >= 0) {
      out.waves = solve_interface(ql, qr, interfaces_[id]);
    } else {
      const Vec3& n = grid_.faces[d][face].normal;
      out.waves = solve_interface(ql, qr, eigendecompose(specs_[il], n), eigendecompose(specs_[ir], n),
                                  interface_spec(il, ir), face);
    }
    // Only a change of principal axes within one material keeps the
    // second-order correction.
    out.correct = specs_[il].id == specs_[ir].id;
  }
  out.waves.left_material = specs_[il].id;
  out.waves.right_material = specs_[ir].id;
  return out;
}

void Solver::sweep_1d(StateField& s, int d, double dt) const {
  const int g = grid_.ghost;
  const int n = grid_.dims[d];
  const int e1 = (d + 1) % 3;
  const int e2 = (d + 2) % 3;
  std::array<int, 3> pos{};
  for (int p = 0; p < 3; ++p) pos[options_.sweep_order[p]] = p;
  // Transverse ghosts are advanced only for directions swept later.
  auto range = [&](int e, int& lo, int& hi) {
    const bool with_ghosts = pos[e] > pos[d];
    lo = with_ghosts ? -g : 0;
    hi = with_ghosts ? grid_.dims[e] + g : grid_.dims[e];
  };
  int lo1, hi1, lo2, hi2;
  range(e1, lo1, hi1);
  range(e2, lo2, hi2);
  const int n1 = hi1 - lo1;
  const long long npencils = static_cast<long long>(n1) * (hi2 - lo2);
  const int ncell = n + 2 * g;   // pencil cells, position c <-> coordinate c - g
  const int nface = ncell - 1;   // face f between cells f and f + 1
  const bool second = options_.second_order;
  const LimiterChoice limiter = options_.limiter;

#pragma omp parallel
  {
    std::vector<long long> cidx(ncell);
    std::vector<State> q(ncell);
    std::vector<FaceResult> res(nface);
    std::vector<double> area(nface);
    std::vector<State> flux(nface);
#pragma omp for schedule(static)
    for (long long pidx = 0; pidx < npencils; ++pidx) {
      std::array<int, 3> idx{};
      idx[e1] = lo1 + static_cast<int>(pidx % n1);
      idx[e2] = lo2 + static_cast<int>(pidx / n1);
      for (int c = 0; c < ncell; ++c) {
        idx[d] = c - g;
        cidx[c] = grid_.cell_index(idx[0], idx[1], idx[2]);
        q[c] = s.q[cidx[c]];
      }
      // Faces 0 .. nface-1 are all needed: corrections at 1 .. nface-2 read
      // their neighbours as upwind waves.
      for (int f = 0; f < nface; ++f) {
        idx[d] = f + 1 - g;
        const long long fi = grid_.face_index(d, idx[0], idx[1], idx[2]);
        area[f] = grid_.faces[d][fi].area;
        res[f] = solve_face(d, fi, cidx[f], cidx[f + 1], q[f], q[f + 1]);
      }
      if (second) {
        for (int f = 0; f < nface; ++f) flux[f].setZero();
        for (int f = 1; f + 1 < nface; ++f) {
          if (!res[f].correct) continue;
          const WaveSet& ws = res[f].waves;
          const InstanceData& dl = inst_[grid_.instance[cidx[f]]];
          const InstanceData& dr = inst_[grid_.instance[cidx[f + 1]]];
          const auto phi = limiter_factors(ws, &res[f - 1].waves, &res[f + 1].waves, limiter, dl.energy, dr.energy);
          const double vavg = 0.5 * (grid_.volume[cidx[f]] + grid_.volume[cidx[f + 1]]);
          const double ratio = dt * area[f] / vavg;
          State acc = State::Zero();
          for (int p = 0; p < ws.count; ++p) {
            const double sp = std::abs(ws.speeds[p]);
            acc += (0.5 * sp * (1.0 - ratio * sp) * phi[p]) * ws.jumps[p];
          }
          flux[f] = acc;
        }
      }
      for (int c = g; c < g + n; ++c) {
        const double scale = dt / grid_.volume[cidx[c]];
        State dq = area[c - 1] * res[c - 1].waves.apdq + area[c] * res[c].waves.amdq;
        if (second) dq += area[c] * flux[c] - area[c - 1] * flux[c - 1];
        s.q[cidx[c]] = q[c] - scale * dq;
      }
    }
  }
}

void Solver::check_finite(const StateField& s) const {
  for (int k = 0; k < grid_.dims[2]; ++k)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int i = 0; i < grid_.dims[0]; ++i) {
        if (!s.q[grid_.cell_index(i, j, k)].allFinite()) {
          std::ostringstream os;
          os << "non-finite state at step " << step_count_ << ", cell (" << i << ", " << j << ", " << k << ")";
          throw SolverError(os.str());
        }
      }
}

void Solver::strang_step(StateField& s, double dt) {
  fill_ghosts(s, s.t);
  source_step(s, 0.5 * dt);
  for (int d : options_.sweep_order) sweep_1d(s, d, dt);
  source_step(s, 0.5 * dt);
  s.t += dt;
  ++step_count_;
  check_finite(s);
}

int Solver::advance(StateField& s, double t_end, const std::function<void(int, const StateField&)>& after_step) {
  const double span = t_end - s.t;
  if (span <= 0) return 0;
  const double dt_max = compute_dt();
  const int nsteps = static_cast<int>(std::ceil(span / dt_max * (1.0 - 1e-14)));
  const double dt = span / nsteps;
  const double t0 = s.t;
  for (int step = 1; step <= nsteps; ++step) {
    strang_step(s, dt);
    s.t = t0 + step * dt;
    if (after_step) after_step(step, s);
  }
  return nsteps;
}

double Solver::energy_density(long long cell, const State& q) const {
  const InstanceData& d = inst_[grid_.instance[cell]];
  return 0.5 * q.dot(d.energy.apply(q));
}

double Solver::total_energy(const StateField& s) const {
  double total = 0;
  for (int k = 0; k < grid_.dims[2]; ++k)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int i = 0; i < grid_.dims[0]; ++i) {
        const long long c = grid_.cell_index(i, j, k);
        total += grid_.volume[c] * energy_density(c, s.q[c]);
      }
  return total;
}

Vec3 Solver::total_momentum(const StateField& s) const {
  Vec3 total = Vec3::Zero();
  for (int k = 0; k < grid_.dims[2]; ++k)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int i = 0; i < grid_.dims[0]; ++i) {
        const long long c = grid_.cell_index(i, j, k);
        const MaterialSpec& spec = specs_[grid_.instance[c]];
        if (spec.material->is_fluid()) continue;
        const double rho = spec.material->derived().density;
        const double rf = spec.material->base().fluid_density;
        total += grid_.volume[c] * (rho * s.q[c].segment<3>(var::kV1) + rf * s.q[c].segment<3>(var::kQ1));
      }
  return total;
}

}  // namespace porowave
