#include "porowave/riemann.hpp"

#include <cmath>
#include <sstream>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

constexpr double kMaxCondition = 1e12;

void traction_rows(ConditionMatrix& c, int row0, const Vec3& n) {
  const double nx = n.x(), ny = n.y(), nz = n.z();
  c(row0 + 0, var::kTau11) = nx;
  c(row0 + 0, var::kTau13) = nz;
  c(row0 + 0, var::kTau12) = ny;
  c(row0 + 1, var::kTau22) = ny;
  c(row0 + 1, var::kTau23) = nz;
  c(row0 + 1, var::kTau12) = nx;
  c(row0 + 2, var::kTau33) = nz;
  c(row0 + 2, var::kTau23) = ny;
  c(row0 + 2, var::kTau13) = nx;
}

}  // namespace

void accumulate_fluctuations(WaveSet& ws) {
  ws.amdq.setZero();
  ws.apdq.setZero();
  for (int p = 0; p < ws.count; ++p) {
    if (ws.speeds[p] < 0) {
      ws.amdq += ws.speeds[p] * ws.jumps[p];
    } else {
      ws.apdq += ws.speeds[p] * ws.jumps[p];
    }
  }
}

WaveSet solve_same_material(const State& ql, const State& qr, const EigenBasis& basis) {
  WaveSet ws;
  ws.count = basis.count;
  ws.normal = basis.normal;
  const State dq = qr - ql;
  for (int p = 0; p < basis.count; ++p) {
    const double alpha = basis.covectors[p].dot(dq);
    ws.speeds[p] = basis.speeds[p];
    ws.families[p] = basis.families[p];
    ws.jumps[p] = alpha * basis.vectors[p];
    ws.energy_jumps[p] = alpha * basis.covectors[p];
  }
  ws.has_energy_jumps = true;
  accumulate_fluctuations(ws);
  return ws;
}

InterfaceMatrices interface_matrices_poro_fluid(const Vec3& n, double eta_d, double z_f) {
  const double zp = z_f * (1.0 - eta_d);
  InterfaceMatrices m;
  m.left = ConditionMatrix::Zero(5, kNumVars);
  m.right = ConditionMatrix::Zero(5, kNumVars);
  for (int i = 0; i < 3; ++i) {
    m.left(0, var::kV1 + i) = n[i];
    m.left(0, var::kQ1 + i) = n[i];
    m.left(4, var::kQ1 + i) = -zp * n[i];
    m.right(0, var::kQ1 + i) = n[i];
    m.right(1 + i, var::kP) = -n[i];
  }
  traction_rows(m.left, 1, n);
  m.left(4, var::kP) = eta_d;
  m.right(4, var::kP) = eta_d;
  return m;
}

InterfaceMatrices interface_matrices_poro_poro(const Vec3& n, double eta_d, double z_f_left,
                                               double zeta) {
  const double zl = (1.0 - zeta) * z_f_left * (1.0 - eta_d);
  const double zr = zeta * z_f_left * (1.0 - eta_d);
  InterfaceMatrices m;
  m.left = ConditionMatrix::Zero(8, kNumVars);
  m.right = ConditionMatrix::Zero(8, kNumVars);
  for (ConditionMatrix* c : {&m.left, &m.right}) {
    traction_rows(*c, 0, n);
    for (int i = 0; i < 3; ++i) {
      (*c)(3 + i, var::kV1 + i) = 1.0;
      (*c)(6, var::kQ1 + i) = n[i];
    }
    (*c)(7, var::kP) = eta_d;
  }
  for (int i = 0; i < 3; ++i) {
    m.left(7, var::kQ1 + i) = -zl * n[i];
    m.right(7, var::kQ1 + i) = zr * n[i];
  }
  return m;
}

InterfaceMatrices interface_matrices(const InterfaceSpec& spec, const Vec3& n) {
  switch (spec.kind) {
    case InterfaceKind::PoroPoro:
      return interface_matrices_poro_poro(n, spec.discharge_efficiency, spec.fluid_impedance, spec.zeta);
    case InterfaceKind::PoroFluid:
      return interface_matrices_poro_fluid(n, spec.discharge_efficiency, spec.fluid_impedance);
    case InterfaceKind::FluidPoro: {
      // Poroelastic medium on the right: exchange sides and negate n.
      InterfaceMatrices pf = interface_matrices_poro_fluid(-n, spec.discharge_efficiency, spec.fluid_impedance);
      InterfaceMatrices m;
      m.left = pf.right;
      m.right = pf.left;
      return m;
    }
    case InterfaceKind::SameMaterial:
      break;
  }
  throw RiemannError("interface matrices requested for a same-material face");
}

InterfaceSystem factor_interface(const EigenBasis& basis_l, const EigenBasis& basis_r, const InterfaceSpec& spec,
                                 long long face_index) {
  InterfaceSystem sys;
  sys.spec = spec;
  sys.normal = basis_l.normal;
  const InterfaceMatrices c = interface_matrices(spec, basis_l.normal);
  sys.nl = basis_l.first_right();
  sys.nr = basis_r.count - basis_r.first_right();
  const int m = static_cast<int>(c.left.rows());
  if (sys.nl + sys.nr != m) {
    std::ostringstream os;
    os << "interface solve failed at face " << face_index << ": " << m << " conditions for "
       << (sys.nl + sys.nr) << " unknown wave strengths";
    throw RiemannError(os.str());
  }
  for (int p = 0; p < sys.nl; ++p) {
    sys.vectors[p] = basis_l.vectors[p];
    sys.speeds[p] = basis_l.speeds[p];
    sys.families[p] = basis_l.families[p];
  }
  for (int q = 0; q < sys.nr; ++q) {
    const int src = basis_r.first_right() + q;
    sys.vectors[sys.nl + q] = basis_r.vectors[src];
    sys.speeds[sys.nl + q] = basis_r.speeds[src];
    sys.families[sys.nl + q] = basis_r.families[src];
  }

  InterfaceLuMatrix a(m, m);
  for (int p = 0; p < sys.nl; ++p) a.col(p) = c.left * sys.vectors[p];
  for (int q = 0; q < sys.nr; ++q) a.col(sys.nl + q) = c.right * sys.vectors[sys.nl + q];
  // Rows mix stress and velocity units, columns mix wave normalizations.
  sys.rowscale = InterfaceVector::Ones(m);
  for (int i = 0; i < m; ++i) {
    const double s = a.row(i).cwiseAbs().maxCoeff();
    if (s > 0) {
      sys.rowscale[i] = s;
      a.row(i) /= s;
    }
  }
  sys.colscale = InterfaceVector::Ones(m);
  for (int j = 0; j < m; ++j) {
    const double s = a.col(j).cwiseAbs().maxCoeff();
    if (s > 0) {
      sys.colscale[j] = s;
      a.col(j) /= s;
    }
  }
  sys.lu.compute(a);
  sys.rcond = sys.lu.rcond();
  if (!(sys.rcond * kMaxCondition > 1.0)) {
    std::ostringstream os;
    os << "interface solve failed at face " << face_index << ": reciprocal condition " << sys.rcond;
    throw RiemannError(os.str());
  }
  return sys;
}

WaveSet solve_interface(const State& ql, const State& qr, const InterfaceSystem& sys, InterfaceStates* states) {
  const InterfaceMatrices c = interface_matrices(sys.spec, sys.normal);
  const InterfaceVector rhs = (c.right * qr - c.left * ql).cwiseQuotient(sys.rowscale);
  const InterfaceVector x = sys.lu.solve(rhs).cwiseQuotient(sys.colscale);

  WaveSet ws;
  ws.normal = sys.normal;
  ws.count = sys.nl + sys.nr;
  State sl = ql, sr = qr;
  for (int p = 0; p < ws.count; ++p) {
    ws.speeds[p] = sys.speeds[p];
    ws.families[p] = sys.families[p];
    ws.jumps[p] = x[p] * sys.vectors[p];
    if (p < sys.nl) {
      sl += ws.jumps[p];
    } else {
      sr -= ws.jumps[p];
    }
  }
  accumulate_fluctuations(ws);
  if (states) {
    states->left = sl;
    states->right = sr;
    states->rcond = sys.rcond;
  }
  return ws;
}

WaveSet solve_interface(const State& ql, const State& qr, const EigenBasis& basis_l,
                        const EigenBasis& basis_r, const InterfaceSpec& spec, long long face_index,
                        InterfaceStates* states) {
  return solve_interface(ql, qr, factor_interface(basis_l, basis_r, spec, face_index), states);
}

}  // namespace porowave
