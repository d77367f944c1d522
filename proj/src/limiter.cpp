#include "porowave/limiter.hpp"

#include <algorithm>

namespace porowave {

namespace {

constexpr double kTinyDenominator = 1e-300;

bool is_shear(WaveFamily f) { return f == WaveFamily::S1 || f == WaveFamily::S2; }

State same_direction_sum(const WaveSet& ws, bool right_going) {
  State s = State::Zero();
  for (int p = 0; p < ws.count; ++p) {
    if ((ws.speeds[p] > 0) == right_going) s += ws.jumps[p];
  }
  return s;
}

State shear_sum(const WaveSet& ws, bool right_going) {
  State s = State::Zero();
  for (int p = 0; p < ws.count; ++p) {
    if ((ws.speeds[p] > 0) == right_going && is_shear(ws.families[p])) s += ws.jumps[p];
  }
  return s;
}

State matching_wave(const WaveSet& ws, WaveFamily family, bool right_going) {
  for (int p = 0; p < ws.count; ++p) {
    if ((ws.speeds[p] > 0) == right_going && ws.families[p] == family) return ws.jumps[p];
  }
  return State::Zero();
}

}  // namespace

double limiter_phi(LimiterFunction f, double theta) {
  switch (f) {
    case LimiterFunction::None:
      return 1.0;
    case LimiterFunction::Minmod:
      return std::max(0.0, std::min(1.0, theta));
    case LimiterFunction::MC:
      return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta}));
    case LimiterFunction::Superbee:
      return std::max({0.0, std::min(1.0, 2.0 * theta), std::min(2.0, theta)});
  }
  return 1.0;
}

double theta_classical(const State& w, const State& w_up) {
  const double den = w.squaredNorm();
  if (den == 0.0) return 0.0;
  return w.dot(w_up) / den;
}

double theta_E_full(const State& w, const State& sum_up, const State& sum_local,
                    const EnergyOperator& e) {
  return theta_E_weighted(e.apply(w), sum_up, sum_local);
}

double theta_E_weighted(const State& ew, const State& sum_up, const State& sum_local) {
  const double den = ew.dot(sum_local);
  if (den <= kTinyDenominator) return 0.0;
  return ew.dot(sum_up) / den;
}

std::array<double, WaveSet::kMaxWaves> limiter_factors(const WaveSet& local, const WaveSet* up_right,
                                                       const WaveSet* up_left,
                                                       const LimiterChoice& choice,
                                                       const EnergyOperator& e_left,
                                                       const EnergyOperator& e_right) {
  std::array<double, WaveSet::kMaxWaves> phi{};
  if (choice.function == LimiterFunction::None) {
    phi.fill(1.0);
    return phi;
  }
  const bool need_sums = choice.strength_ratio != StrengthRatio::Classical;
  State up_sum[2], local_sum[2], up_shear[2];
  // Without E W_p at hand, E is applied to the sums instead:
  // (E w).u = w.(E u) since E is symmetric.
  const bool weight_sums = !local.has_energy_jumps;
  State e_up_sum[2], e_local_sum[2], e_up_shear[2];
  if (need_sums) {
    for (int dir = 0; dir < 2; ++dir) {
      const bool right = dir == 1;
      const WaveSet* up = right ? up_right : up_left;
      local_sum[dir] = same_direction_sum(local, right);
      up_sum[dir] = up ? same_direction_sum(*up, right) : State::Zero();
      up_shear[dir] = up ? shear_sum(*up, right) : State::Zero();
      if (weight_sums) {
        const EnergyOperator& e = right ? e_right : e_left;
        if (choice.strength_ratio == StrengthRatio::EFull) {
          e_up_sum[dir] = e.apply(up_sum[dir]);
          e_local_sum[dir] = e.apply(local_sum[dir]);
        } else {
          e_up_shear[dir] = e.apply(up_shear[dir]);
        }
      }
    }
  }
  for (int p = 0; p < local.count; ++p) {
    const bool right = local.speeds[p] > 0;
    const int dir = right ? 1 : 0;
    const WaveSet* up = right ? up_right : up_left;
    const EnergyOperator& e = right ? e_right : e_left;
    const State& w = local.jumps[p];
    double theta = 0.0;
    switch (choice.strength_ratio) {
      case StrengthRatio::Classical:
        theta = up ? theta_classical(w, matching_wave(*up, local.families[p], right)) : 0.0;
        break;
      case StrengthRatio::EShearOnly:
        if (is_shear(local.families[p])) {
          const State ew = local.has_energy_jumps ? local.energy_jumps[p] : e.apply(w);
          theta = weight_sums ? theta_E_weighted(w, e_up_shear[dir], ew) : theta_E_weighted(ew, up_shear[dir], w);
        } else {
          theta = up ? theta_classical(w, matching_wave(*up, local.families[p], right)) : 0.0;
        }
        break;
      case StrengthRatio::EFull:
        theta = weight_sums ? theta_E_weighted(w, e_up_sum[dir], e_local_sum[dir])
                            : theta_E_weighted(local.energy_jumps[p], up_sum[dir], local_sum[dir]);
        break;
    }
    phi[p] = limiter_phi(choice.function, theta);
  }
  return phi;
}

WaveSet apply_limiter(const WaveSet& local, const WaveSet* up_right, const WaveSet* up_left,
                      const LimiterChoice& choice, const EnergyOperator& e_left,
                      const EnergyOperator& e_right) {
  const auto phi = limiter_factors(local, up_right, up_left, choice, e_left, e_right);
  WaveSet out = local;
  for (int p = 0; p < local.count; ++p) out.jumps[p] = phi[p] * local.jumps[p];
  return out;
}

}  // namespace porowave
