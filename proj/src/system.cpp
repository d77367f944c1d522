#include "porowave/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

// Relative gap (in squared speed, scaled by the largest) below which the two
// shear speeds are treated as coincident.
constexpr double kShearTieTol = 1e-13;

[[noreturn]] void decomposition_failed(const MaterialSpec& mat, const Vec3& n,
                                       const std::string& why) {
  std::ostringstream os;
  os << "decomposition failed for material id " << mat.id << " ("
     << (mat.material ? mat.material->name() : std::string("?")) << "), direction ("
     << n.x() << ", " << n.y() << ", " << n.z() << "): " << why;
  throw DecompositionError(os.str());
}

EigenBasis fluid_basis(const FluidMaterial& f, const Vec3& n) {
  EigenBasis b;
  b.count = 2;
  b.normal = n;
  const double scale = 1.0 / std::sqrt(2.0 * f.density);
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? -1.0 : 1.0;
    State r = State::Zero();
    r[var::kP] = sign * f.impedance * scale;
    r.segment<3>(var::kQ1) = n * scale;
    State l = State::Zero();
    l[var::kP] = r[var::kP] / f.bulk_modulus;
    l.segment<3>(var::kQ1) = f.density * r.segment<3>(var::kQ1);
    b.speeds[side] = sign * f.sound_speed;
    b.vectors[side] = r;
    b.covectors[side] = l;
    b.families[side] = WaveFamily::Acoustic;
  }
  return b;
}

constexpr std::array<WaveFamily, 4> kPoroFamilies = {WaveFamily::FastP, WaveFamily::S1,
                                                     WaveFamily::S2, WaveFamily::SlowP};

// Fills a poroelastic basis from principal-axes right-going vectors (ordered
// FastP, S1, S2, SlowP) and rotates it to global axes.
EigenBasis assemble_poro_basis(const Material& mat, const Mat3& r,
                               const std::array<double, 4>& speed,
                               const std::array<State, 4>& right, const Vec3& n_global) {
  EigenBasis b;
  b.count = 8;
  b.normal = n_global;
  const Mat13& e = mat.energy().e;
  for (int w = 0; w < 4; ++w) {
    State left = right[w];
    left.head<7>() = -left.head<7>();
    const int li = w;
    const int ri = 7 - w;
    b.speeds[li] = -speed[w];
    b.speeds[ri] = speed[w];
    b.families[li] = b.families[ri] = kPoroFamilies[w];
    b.vectors[li] = rotate_state(left, r);
    b.vectors[ri] = rotate_state(right[w], r);
    b.covectors[li] = rotate_covector(e * left, r);
    b.covectors[ri] = rotate_covector(e * right[w], r);
  }
  return b;
}

// Resolves a degenerate pair: the first output maximizes the projection of
// the solid velocity on ref.
template <typename V>
void resolve_shear_tie(V& r1, V& r2, const Vec3& ref, int solid_offset) {
  const double a1 = ref.dot(r1.template segment<3>(solid_offset));
  const double a2 = ref.dot(r2.template segment<3>(solid_offset));
  const double norm = std::hypot(a1, a2);
  if (norm == 0.0) return;
  const V n1 = (a1 * r1 + a2 * r2) / norm;
  const V n2 = (-a2 * r1 + a1 * r2) / norm;
  r1 = n1;
  r2 = n2;
}

}  // namespace

std::string_view family_name(WaveFamily f) {
  switch (f) {
    case WaveFamily::FastP: return "FastP";
    case WaveFamily::S1: return "S1";
    case WaveFamily::S2: return "S2";
    case WaveFamily::SlowP: return "SlowP";
    case WaveFamily::Acoustic: return "Acoustic";
  }
  return "?";
}

double EigenBasis::max_speed() const {
  double s = 0;
  for (int p = 0; p < count; ++p) s = std::max(s, std::abs(speeds[p]));
  return s;
}

SymmetricFactor factor_energy(const Mat13& e) {
  SymmetricFactor f;
  std::vector<int> support;
  for (int i = 0; i < kNumVars; ++i) {
    if (e(i, i) != 0.0) support.push_back(i);
  }
  const int m = static_cast<int>(support.size());
  Eigen::MatrixXd sub(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) sub(a, b) = e(support[a], support[b]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) return f;
  const Eigen::MatrixXd linv =
      llt.matrixL().solve(Eigen::MatrixXd::Identity(m, m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) f.linv(support[a], support[b]) = linv(a, b);
  }
  f.ok = true;
  return f;
}

Vec3 shear_reference_axis(const Vec3& n) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(n[i]) < std::abs(n[best])) best = i;
  }
  return Vec3::Unit(best);
}

SystemMatrices assemble_poro(const Material& mat, const Vec3& n) {
  const PoroelasticBase& b = mat.base();
  const PoroelasticDerived& d = mat.derived();
  const Mat6& cu = d.undrained;
  const double m = d.coupling_modulus;
  const Vec3& a = d.alpha;
  const double n1 = n.x(), n2 = n.y(), n3 = n.z();

  Eigen::Matrix<double, 7, 6> asv;
  asv << n1 * cu(0, 0), n2 * cu(0, 1), n3 * cu(0, 2), n1 * a[0] * m, n2 * a[0] * m, n3 * a[0] * m,
         n1 * cu(0, 1), n2 * cu(1, 1), n3 * cu(1, 2), n1 * a[1] * m, n2 * a[1] * m, n3 * a[1] * m,
         n1 * cu(0, 2), n2 * cu(1, 2), n3 * cu(2, 2), n1 * a[2] * m, n2 * a[2] * m, n3 * a[2] * m,
         0, n3 * cu(3, 3), n2 * cu(3, 3), 0, 0, 0,
         n3 * cu(4, 4), 0, n1 * cu(4, 4), 0, 0, 0,
         n2 * cu(5, 5), n1 * cu(5, 5), 0, 0, 0, 0,
         -n1 * m * a[0], -n2 * m * a[1], -n3 * m * a[2], -n1 * m, -n2 * m, -n3 * m;
  asv = -asv;

  const Vec3& mi = d.fluid_inertia;
  const Vec3& dl = d.inertia_det;
  const double rf = b.fluid_density;
  const double rho = d.density;
  Eigen::Matrix<double, 6, 7> avs;
  avs << n1 * mi[0] / dl[0], 0, 0, 0, n3 * mi[0] / dl[0], n2 * mi[0] / dl[0], n1 * rf / dl[0],
         0, n2 * mi[1] / dl[1], 0, n3 * mi[1] / dl[1], 0, n1 * mi[1] / dl[1], n2 * rf / dl[1],
         0, 0, n3 * mi[2] / dl[2], n2 * mi[2] / dl[2], n1 * mi[2] / dl[2], 0, n3 * rf / dl[2],
         -n1 * rf / dl[0], 0, 0, 0, -n3 * rf / dl[0], -n2 * rf / dl[0], -n1 * rho / dl[0],
         0, -n2 * rf / dl[1], 0, -n3 * rf / dl[1], 0, -n1 * rf / dl[1], -n2 * rho / dl[1],
         0, 0, -n3 * rf / dl[2], -n2 * rf / dl[2], -n1 * rf / dl[2], 0, -n3 * rho / dl[2];
  avs = -avs;

  SystemMatrices s;
  s.normal = n;
  s.a_breve.block<7, 6>(0, 7) = asv;
  s.a_breve.block<6, 7>(7, 0) = avs;
  const double eta = b.viscosity;
  for (int i = 0; i < 3; ++i) {
    const double k = eta / (dl[i] * b.permeability[i]);
    s.dissipation(7 + i, 10 + i) = rf * k;
    s.dissipation(10 + i, 10 + i) = -rho * k;
  }
  return s;
}

SystemMatrices assemble_fluid(const FluidMaterial& f, const Vec3& n) {
  SystemMatrices s;
  s.normal = n;
  for (int i = 0; i < 3; ++i) {
    s.a_breve(var::kP, var::kQ1 + i) = f.bulk_modulus * n[i];
    s.a_breve(var::kQ1 + i, var::kP) = n[i] / f.density;
  }
  return s;
}

EigenBasis eigendecompose(const MaterialSpec& spec, const Vec3& n_global) {
  const Material& mat = *spec.material;
  if (mat.is_fluid()) return fluid_basis(mat.fluid(), n_global);

  const Mat3& rot = spec.axes.r;
  const Vec3 n = rot.transpose() * n_global;
  const Vec3 ref = rot.transpose() * shear_reference_axis(n_global);
  const SystemMatrices sys = assemble_poro(mat, n);
  const Eigen::Matrix<double, 7, 6> asv = sys.a_sv();
  const Eigen::Matrix<double, 7, 7> es = mat.energy().stress_block();
  const Mat6 ev = mat.energy().velocity_block();

  // A_vs A_sv = E_v^{-1} (A_sv^T E_s A_sv): symmetric-definite generalized problem.
  Mat6 k = asv.transpose() * es * asv;
  k = 0.5 * (k + k.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(k, ev);
  if (ges.info() != Eigen::Success) decomposition_failed(spec, n_global, "eigensolver did not converge");

  const Vec6& lam = ges.eigenvalues();  // ascending
  const double lmax = lam[5];
  if (!(lmax > 0) || !(lam[2] > 1e-8 * lmax) || std::abs(lam[1]) > 1e-8 * lmax ||
      std::abs(lam[0]) > 1e-8 * lmax) {
    decomposition_failed(spec, n_global, "unexpected spectrum (expected 4 positive, 2 zero)");
  }

  std::array<Vec6, 4> xv;
  std::array<double, 4> speed;
  for (int w = 0; w < 4; ++w) {
    xv[w] = ges.eigenvectors().col(5 - w);
    speed[w] = std::sqrt(lam[5 - w]);
  }
  if (lam[4] - lam[3] <= kShearTieTol * lmax) {
    resolve_shear_tie(xv[1], xv[2], ref, 0);
    const double s = std::sqrt(0.5 * (lam[4] + lam[3]));
    speed[1] = speed[2] = s;
  }

  std::array<State, 4> right;
  const double half = std::sqrt(0.5);
  for (int w = 0; w < 4; ++w) {
    const Vec6 rv = xv[w] * half;
    State r;
    r.head<7>() = asv * rv / speed[w];
    r.tail<6>() = rv;
    right[w] = r;
  }
  return assemble_poro_basis(mat, rot, speed, right, n_global);
}

EigenBasis eigendecompose_dense(const MaterialSpec& spec, const Vec3& n_global) {
  const Material& mat = *spec.material;
  const bool fluid = mat.is_fluid();
  const Mat3& rot = spec.axes.r;
  const Vec3 n = fluid ? n_global : Vec3(rot.transpose() * n_global);
  const SystemMatrices sys = fluid ? assemble_fluid(mat.fluid(), n) : assemble_poro(mat, n);
  const Mat13& e = mat.energy().e;

  // E = L L^T on its support (the fluid E has structural zero rows); then
  // L^{-1} (E A) L^{-T} is symmetric with the eigenvalues of A.
  const SymmetricFactor f = factor_energy(e);
  if (!f.ok) decomposition_failed(spec, n_global, "energy matrix is not positive definite on its support");
  Mat13 h = f.symmetrize(e * sys.a_breve);
  h = 0.5 * (h + h.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat13> hs(h);
  if (hs.info() != Eigen::Success) decomposition_failed(spec, n_global, "symmetric eigensolve failed");
  const State& mu = hs.eigenvalues();
  const double mumax = mu.cwiseAbs().maxCoeff();

  std::vector<int> idx;
  for (int i = 0; i < kNumVars; ++i) {
    if (std::abs(mu[i]) > 1e-8 * mumax) idx.push_back(i);
  }
  const int expected = fluid ? 2 : 8;
  if (static_cast<int>(idx.size()) != expected) {
    decomposition_failed(spec, n_global, "unexpected number of nonzero speeds");
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return mu[a] < mu[b]; });

  std::vector<State> vecs;
  std::vector<double> speeds;
  for (int i : idx) {
    State r = f.unsymmetrize(hs.eigenvectors().col(i));
    r /= std::sqrt(r.dot(e * r));
    vecs.push_back(r);
    speeds.push_back(mu[i]);
  }

  if (fluid) {
    EigenBasis b;
    b.count = 2;
    b.normal = n_global;
    for (int p = 0; p < 2; ++p) {
      b.speeds[p] = speeds[p];
      b.vectors[p] = vecs[p];
      b.covectors[p] = e * vecs[p];
      b.families[p] = WaveFamily::Acoustic;
    }
    return b;
  }

  const Vec3 ref = rot.transpose() * shear_reference_axis(n_global);
  const double lmax = speeds[7] * speeds[7];
  if (speeds[6] * speeds[6] - speeds[5] * speeds[5] <= kShearTieTol * lmax) {
    resolve_shear_tie(vecs[1], vecs[2], ref, var::kV1);
    resolve_shear_tie(vecs[6], vecs[5], ref, var::kV1);
    const double s = std::sqrt(0.5 * (speeds[6] * speeds[6] + speeds[5] * speeds[5]));
    speeds[1] = speeds[2] = -s;
    speeds[5] = speeds[6] = s;
  }
  EigenBasis b;
  b.count = 8;
  b.normal = n_global;
  for (int p = 0; p < 8; ++p) {
    b.speeds[p] = speeds[p];
    b.vectors[p] = rotate_state(vecs[p], rot);
    b.covectors[p] = rotate_covector(e * vecs[p], rot);
    b.families[p] = kPoroFamilies[p < 4 ? p : 7 - p];
  }
  return b;
}

}  // namespace porowave
