#pragma once

#include <array>

#include "porowave/materials.hpp"
#include "porowave/riemann.hpp"

namespace porowave {

enum class StrengthRatio { Classical, EShearOnly, EFull };
enum class LimiterFunction { None, Minmod, MC, Superbee };

struct LimiterChoice {
  StrengthRatio strength_ratio = StrengthRatio::EFull;
  LimiterFunction function = LimiterFunction::MC;
};

double limiter_phi(LimiterFunction f, double theta);

double theta_classical(const State& w, const State& w_up);

// E in global axes of one cell.
struct EnergyOperator {
  const EnergyMatrix* energy = nullptr;
  Mat3 axes = Mat3::Identity();
  const Mat13* global = nullptr;  // optional precomputed R E R^T

  State apply(const State& x) const { return global ? State(*global * x) : apply_energy(*energy, axes, x); }
};

double theta_E_full(const State& w, const State& sum_up, const State& sum_local,
                    const EnergyOperator& e);
// Same ratio with E w supplied.
double theta_E_weighted(const State& ew, const State& sum_up, const State& sum_local);

// Limiter factors phi(theta_p) for each wave of `local`. `up_right` is the
// upwind waveset for right-going waves (the face on the left), `up_left` the
// one for left-going waves (the face on the right); either may be null.
// e_left/e_right are the energy operators of the cells adjacent to the face:
// left-going waves travel into the left cell.
std::array<double, WaveSet::kMaxWaves> limiter_factors(const WaveSet& local, const WaveSet* up_right,
                                                       const WaveSet* up_left,
                                                       const LimiterChoice& choice,
                                                       const EnergyOperator& e_left,
                                                       const EnergyOperator& e_right);

// e_left/e_right are ignored for the E-weighted ratios when
// local.has_energy_jumps is set (both cells share that energy matrix).
// Returns `local` with every jump scaled by its limiter factor.
WaveSet apply_limiter(const WaveSet& local, const WaveSet* up_right, const WaveSet* up_left,
                      const LimiterChoice& choice, const EnergyOperator& e_left,
                      const EnergyOperator& e_right);

}  // namespace porowave
