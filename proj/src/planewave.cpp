#include "porowave/planewave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "porowave/errors.hpp"

namespace porowave {

namespace {

using CMat13 = Eigen::Matrix<Complex, kNumVars, kNumVars>;

constexpr double kDegenerateTol = 1e-8;

CState to_complex(const State& re, const State& im) {
  CState z;
  for (int i = 0; i < kNumVars; ++i) z[i] = Complex(re[i], im[i]);
  return z;
}

CState rotate_complex(const CState& v, const Mat3& r) {
  return to_complex(rotate_state(v.real(), r), rotate_state(v.imag(), r));
}

Complex e_inner(const CState& a, const CState& b, const Mat13& e) {
  return a.dot(e.cast<Complex>() * b);  // conjugates a
}

int solid_family_index(WaveFamily f) {
  switch (f) {
    case WaveFamily::FastP: return 0;
    case WaveFamily::S1: return 1;
    case WaveFamily::S2: return 2;
    case WaveFamily::SlowP: return 3;
    case WaveFamily::Acoustic: break;
  }
  throw PlaneWaveError("acoustic family requested for a poroelastic material");
}

bool is_shear(WaveFamily f) { return f == WaveFamily::S1 || f == WaveFamily::S2; }

// Makes ref . (solid velocity) real and positive; falls back to the largest
// solid velocity component when the projection vanishes.
void fix_phase(CState& v, const std::optional<Vec3>& ref, int vel_offset) {
  const Eigen::Matrix<Complex, 3, 1> u = v.segment<3>(vel_offset);
  const double unorm = u.norm();
  Complex a(0, 0);
  if (ref) a = ref->cast<Complex>().dot(u);  // ref is real, no conjugation effect
  if (!ref || std::abs(a) <= 1e-9 * unorm) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(u[i]) > std::abs(u[best])) best = i;
    }
    a = u[best];
  }
  if (std::abs(a) == 0.0) return;
  v *= std::conj(a) / std::abs(a);
}

PlaneWaveSolution fluid_wave(const PlaneWaveSpec& spec) {
  if (spec.family != WaveFamily::Acoustic) {
    throw PlaneWaveError("only the acoustic family exists in a fluid");
  }
  const FluidMaterial& f = spec.material.material->fluid();
  PlaneWaveSolution sol;
  sol.ell = spec.ell;
  sol.omega = spec.omega;
  sol.family = WaveFamily::Acoustic;
  sol.k = Complex(spec.omega / f.sound_speed, 0.0);
  const double scale = 1.0 / std::sqrt(2.0 * f.density);
  sol.v[var::kP] = f.impedance * scale;
  for (int i = 0; i < 3; ++i) sol.v[var::kQ1 + i] = spec.ell[i] * scale;
  sol.wavelength = 2.0 * std::numbers::pi / sol.k.real();
  return sol;
}

}  // namespace

PlaneWaveSolution build_plane_wave(const PlaneWaveSpec& spec) {
  if (!spec.material.material) throw PlaneWaveError("plane wave without a material");
  if (std::abs(spec.ell.norm() - 1.0) > 1e-12) throw PlaneWaveError("ell must be a unit vector");
  if (spec.polarization && std::abs(spec.polarization->norm() - 1.0) > 1e-12) {
    throw PlaneWaveError("polarization must be a unit vector");
  }
  if (!(spec.omega > 0)) throw PlaneWaveError("omega must be positive");
  const Material& mat = *spec.material.material;
  if (mat.is_fluid()) return fluid_wave(spec);
  const int want = solid_family_index(spec.family);

  const Mat3& rot = spec.material.axes.r;
  const Vec3 ell_p = rot.transpose() * spec.ell;
  const SystemMatrices sys = assemble_poro(mat, ell_p);
  const Mat13& e = mat.energy().e;
  const SymmetricFactor fac = factor_energy(e);
  if (!fac.ok) throw PlaneWaveError("energy matrix is not positive definite");

  // (omega I - i D) v = k A v; in symmetrized coordinates y = L^T v this is
  // B^{-1} H y = (1/k) y with H, G symmetric.
  const Mat13 h = fac.symmetrize(e * sys.a_breve);
  const Mat13 g = fac.symmetrize(e * sys.dissipation);
  const CMat13 b = spec.omega * CMat13::Identity() - Complex(0, 1) * g.cast<Complex>();
  const CMat13 m = b.partialPivLu().solve(h.cast<Complex>());
  Eigen::ComplexEigenSolver<CMat13> ces(m);
  if (ces.info() != Eigen::Success) throw PlaneWaveError("complex eigensolve did not converge");

  const auto& mu = ces.eigenvalues();
  double mumax = 0;
  for (int i = 0; i < kNumVars; ++i) mumax = std::max(mumax, std::abs(mu[i]));
  std::vector<int> fwd;
  for (int i = 0; i < kNumVars; ++i) {
    if (mu[i].real() > 1e-8 * mumax) fwd.push_back(i);
  }
  if (fwd.size() != 4) throw PlaneWaveError("ambiguous family: expected 4 forward branches");
  // Fastest first: largest Re(1/k) phase speed means smallest Re k.
  std::sort(fwd.begin(), fwd.end(), [&](int a, int c) { return (1.0 / mu[a]).real() < (1.0 / mu[c]).real(); });

  std::array<Complex, 4> ks;
  std::array<CState, 4> vs;
  const CMat13 linv_t = fac.linv.transpose().cast<Complex>();
  for (int w = 0; w < 4; ++w) {
    ks[w] = 1.0 / mu[fwd[w]];
    CState v = linv_t * ces.eigenvectors().col(fwd[w]);
    v /= std::sqrt(e_inner(v, v, e).real());
    vs[w] = v;
  }
  for (int w = 0; w + 1 < 4; ++w) {
    const bool close = std::abs(ks[w] - ks[w + 1]) <= kDegenerateTol * std::abs(ks[w]);
    const bool shear_pair = w == 1;
    if (close && !shear_pair) throw PlaneWaveError("ambiguous family: repeated non-shear wavenumber");
  }

  const bool degenerate = std::abs(ks[1] - ks[2]) <= kDegenerateTol * std::abs(ks[1]);
  CState v = vs[want];
  Complex k = ks[want];
  std::optional<Vec3> ref;
  if (is_shear(spec.family)) {
    ref = spec.polarization;
  } else {
    ref = spec.ell;
  }
  if (degenerate && is_shear(spec.family)) {
    if (!spec.polarization) throw PlaneWaveError("polarization required for a degenerate shear pair");
    const Vec3 s_p = rot.transpose() * *spec.polarization;
    CState u1 = vs[1];
    CState u2 = vs[2] - e_inner(u1, vs[2], e) * u1;
    u2 /= std::sqrt(e_inner(u2, u2, e).real());
    const Complex a1 = s_p.cast<Complex>().dot(u1.segment<3>(var::kV1));
    const Complex a2 = s_p.cast<Complex>().dot(u2.segment<3>(var::kV1));
    const double an = std::sqrt(std::norm(a1) + std::norm(a2));
    if (an == 0.0) throw PlaneWaveError("polarization is orthogonal to the shear plane");
    v = (std::conj(a1) * u1 + std::conj(a2) * u2) / an;
    k = 0.5 * (ks[1] + ks[2]);
  }

  PlaneWaveSolution sol;
  sol.ell = spec.ell;
  sol.omega = spec.omega;
  sol.family = spec.family;
  sol.k = k;
  sol.v = rotate_complex(v, rot);
  fix_phase(sol.v, ref, var::kV1);
  sol.wavelength = 2.0 * std::numbers::pi / k.real();
  if (k.imag() > 1e-14 * k.real()) sol.decay_length = 1.0 / k.imag();
  return sol;
}

State evaluate(const PlaneWaveSolution& sol, const Vec3& x, double t) {
  const Complex phase = std::exp(Complex(0, 1) * (sol.k * sol.ell.dot(x) - sol.omega * t));
  return (sol.v * phase).real();
}

CState plane_wave_residual(const PlaneWaveSolution& sol, const MaterialSpec& material) {
  const Material& mat = *material.material;
  const Mat3& rot = material.axes.r;
  if (mat.is_fluid()) {
    const SystemMatrices sys = assemble_fluid(mat.fluid(), sol.ell);
    return Complex(0, -sol.omega) * sol.v + Complex(0, 1) * sol.k * (sys.a_breve.cast<Complex>() * sol.v);
  }
  const CState vp = rotate_complex(sol.v, rot.transpose());
  const SystemMatrices sys = assemble_poro(mat, rot.transpose() * sol.ell);
  const CState r = Complex(0, -sol.omega) * vp + Complex(0, 1) * sol.k * (sys.a_breve.cast<Complex>() * vp) -
                   sys.dissipation.cast<Complex>() * vp;
  return rotate_complex(r, rot);
}

}  // namespace porowave
