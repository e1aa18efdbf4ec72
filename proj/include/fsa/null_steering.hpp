#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>

#include "fsa/constants.hpp"
#include "fsa/errors.hpp"
#include "fsa/frequency_plan.hpp"
#include "fsa/geometry.hpp"
#include "fsa/metrics.hpp"
#include "fsa/terminal.hpp"

namespace fsa {

/// Bob-minus-Eve location difference in the sine-angle and range domains.
struct GeometryGap {
  double delta_u = 0.0;    // sin(theta_B) - sin(theta_E)
  double delta_r_m = 0.0;  // r_B - r_E
};

enum class NullCase { SameAngle, SameRange, GeneralPositive, GeneralNegative };

/// Effective received powers at the base carrier: P = P_max N |g_f0|^2.
struct LinkBudget {
  double p_bob_w = 0.0;
  double p_eve_w = 0.0;
  double noise_w = 0.0;
};

inline LinkBudget make_link_budget(const ArrayGeometry& geom, const Scenario& scenario) {
  const double n = geom.n_antennas();
  return LinkBudget{
      scenario.power_budget_w() * n * std::norm(scenario.bob().path_gain_f0()),
      scenario.power_budget_w() * n * std::norm(scenario.eves().front().path_gain_f0()),
      scenario.noise_power_w()};
}

/// Closed-form solution of the secrecy-guaranteed problem for one case of the
/// Bob/Eve geometry. The uniform-increment ladder is implied: delta_f_hz is
/// the ladder seed, so antenna n radiates at carrier_hz + n * delta_f_hz.
struct NullSolution {
  double delta_f_hz = 0.0;
  double carrier_hz = 0.0;
  bool feasible = false;
  NullCase case_id = NullCase::SameAngle;
  double achieved_rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
  long null_index_k = 0;

  // Relaxed-problem solution, populated by the same-angle solver where the
  // relaxation has a closed form even when the strict null is out of reach.
  std::optional<double> relaxed_delta_f_hz;
  std::optional<double> relaxed_carrier_hz;
};

/// Whether Eve falls inside the main lobe of the base-carrier beam pointed at
/// Bob (|delta_u| < 2/N). The case solvers target this regime; the predicate
/// is exposed for callers rather than enforced.
inline bool inside_main_lobe(const ArrayGeometry& geom, const GeometryGap& gap) {
  return std::abs(gap.delta_u) < 2.0 / geom.n_antennas();
}

namespace detail {

inline bool ge_with_tolerance(double value, double threshold) {
  const double scale = std::max(std::abs(value), std::abs(threshold));
  return value >= threshold - 1e-9 * scale;
}

inline bool carrier_in_bounds(double carrier_hz, double f0, double f_high) {
  const double slack = 1e-9;
  return carrier_hz >= f0 * (1.0 - slack) && carrier_hz <= f_high * (1.0 + slack);
}

inline double null_rate(double p_bob_w, double noise_w, double f0, double carrier_hz) {
  const double gamma = f0 / carrier_hz;
  return std::log1p(p_bob_w * gamma * gamma / noise_w) / std::log(2.0);
}

}  // namespace detail

/// Smallest-residual integer k (k mod N != 0) solving the null condition
/// (f_c/f0) du = 2k/N + 2 dr df / c to relative tolerance 1e-9, if any.
inline std::optional<long> null_condition_k(const ArrayGeometry& geom, const GeometryGap& gap,
                                            double carrier_hz, double delta_f_hz) {
  const double n = geom.n_antennas();
  const double lhs = (carrier_hz / geom.base_frequency_hz()) * gap.delta_u;
  const double offset_term = 2.0 * gap.delta_r_m * delta_f_hz / kSpeedOfLight;
  const double k_exact = 0.5 * n * (lhs - offset_term);

  std::optional<long> best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const long k : {static_cast<long>(std::floor(k_exact)),
                       static_cast<long>(std::floor(k_exact)) + 1}) {
    if (k % geom.n_antennas() == 0) continue;
    const double residual = std::abs(lhs - 2.0 * k / n - offset_term);
    const double scale =
        std::max({std::abs(lhs), std::abs(2.0 * k / n), std::abs(offset_term)});
    if (residual > 1e-9 * scale) continue;
    if (residual < best_residual ||
        (residual == best_residual && best && std::labs(k) < std::labs(*best))) {
      best = k;
      best_residual = residual;
    }
  }
  return best;
}

/// Case 1 (same angle, different range): the carrier cannot move the null, so
/// the ladder seed does all the work. Also returns the relaxed-problem
/// optimum min{c/(N |dr|), df_max} at the base carrier.
inline NullSolution solve_case_same_angle(const ArrayGeometry& geom, const GeometryGap& gap,
                                          const FrequencyLimits& limits,
                                          const LinkBudget& budget) {
  if (gap.delta_u != 0.0 || gap.delta_r_m == 0.0) {
    throw WrongCase("solve_case_same_angle requires delta_u == 0 and delta_r != 0");
  }
  const double f0 = geom.base_frequency_hz();
  const double df_null = kSpeedOfLight / (geom.n_antennas() * std::abs(gap.delta_r_m));

  NullSolution sol;
  sol.case_id = NullCase::SameAngle;
  sol.carrier_hz = f0;
  sol.null_index_k = gap.delta_r_m > 0.0 ? -1 : 1;
  sol.relaxed_delta_f_hz = std::min(df_null, limits.increment_max_hz);
  sol.relaxed_carrier_hz = f0;
  if (detail::ge_with_tolerance(limits.increment_max_hz, df_null)) {
    sol.delta_f_hz = df_null;
    sol.feasible = true;
    sol.achieved_rate_bps_hz = detail::null_rate(budget.p_bob_w, budget.noise_w, f0, f0);
  } else {
    sol.delta_f_hz = *sol.relaxed_delta_f_hz;
  }
  return sol;
}

/// Case 2 (same range, different angle): the offsets cannot move the null, so
/// the carrier is raised to shrink the beam until Eve sits on a zero.
inline NullSolution solve_case_same_range(const ArrayGeometry& geom, const GeometryGap& gap,
                                          const FrequencyLimits& limits,
                                          const LinkBudget& budget) {
  if (gap.delta_r_m != 0.0 || gap.delta_u == 0.0) {
    throw WrongCase("solve_case_same_range requires delta_r == 0 and delta_u != 0");
  }
  const double f0 = geom.base_frequency_hz();
  const double carrier = 2.0 * f0 / (geom.n_antennas() * std::abs(gap.delta_u));

  NullSolution sol;
  sol.case_id = NullCase::SameRange;
  sol.delta_f_hz = 0.0;
  sol.carrier_hz = carrier;
  sol.null_index_k = gap.delta_u > 0.0 ? 1 : -1;
  if (detail::ge_with_tolerance(limits.carrier_max_hz, carrier) &&
      detail::carrier_in_bounds(carrier, f0, limits.carrier_max_hz)) {
    sol.feasible = true;
    sol.achieved_rate_bps_hz = detail::null_rate(budget.p_bob_w, budget.noise_w, f0, carrier);
  }
  return sol;
}

/// General case (both gaps nonzero). For du*dr > 0 a single control suffices:
/// the ladder seed when the offset budget allows, otherwise the carrier
/// alone. For du*dr < 0 an insufficient offset budget is still worth
/// spending in full, since it lowers the carrier needed to finish the null.
inline NullSolution solve_case_general(const ArrayGeometry& geom, const GeometryGap& gap,
                                       const FrequencyLimits& limits, const LinkBudget& budget) {
  if (gap.delta_u == 0.0 || gap.delta_r_m == 0.0) {
    throw WrongCase("solve_case_general requires both delta_u and delta_r nonzero");
  }
  const double f0 = geom.base_frequency_hz();
  const int n = geom.n_antennas();
  const double sign_u = gap.delta_u > 0.0 ? 1.0 : -1.0;
  const double carrier_only = 2.0 * f0 / (n * std::abs(gap.delta_u));

  NullSolution sol;
  sol.case_id = gap.delta_u * gap.delta_r_m > 0.0 ? NullCase::GeneralPositive
                                                  : NullCase::GeneralNegative;
  if (sol.case_id == NullCase::GeneralPositive) {
    const double df_full =
        kSpeedOfLight / (2.0 * gap.delta_r_m) * (gap.delta_u + 2.0 * sign_u / n);
    if (df_full >= 0.0 && detail::ge_with_tolerance(limits.increment_max_hz, df_full)) {
      sol.delta_f_hz = df_full;
      sol.carrier_hz = f0;
      sol.null_index_k = static_cast<long>(-sign_u);
      sol.feasible = true;
    } else {
      sol.delta_f_hz = 0.0;
      sol.carrier_hz = carrier_only;
      sol.null_index_k = static_cast<long>(sign_u);
      sol.feasible = detail::carrier_in_bounds(carrier_only, f0, limits.carrier_max_hz);
    }
  } else {
    const double df_full =
        kSpeedOfLight / (2.0 * gap.delta_r_m) * (gap.delta_u - 2.0 * sign_u / n);
    if (df_full >= 0.0 && detail::ge_with_tolerance(limits.increment_max_hz, df_full)) {
      sol.delta_f_hz = df_full;
      sol.carrier_hz = f0;
      sol.null_index_k = static_cast<long>(sign_u);
      sol.feasible = true;
    } else {
      sol.delta_f_hz = limits.increment_max_hz;
      sol.carrier_hz = carrier_only + 2.0 * gap.delta_r_m * limits.increment_max_hz * f0 /
                                          (kSpeedOfLight * gap.delta_u);
      sol.null_index_k = static_cast<long>(sign_u);
      sol.feasible = detail::carrier_in_bounds(sol.carrier_hz, f0, limits.carrier_max_hz);
    }
  }
  if (sol.feasible) {
    sol.achieved_rate_bps_hz =
        detail::null_rate(budget.p_bob_w, budget.noise_w, f0, sol.carrier_hz);
  } else {
    sol.achieved_rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
  }
  return sol;
}

/// Dispatch on the geometric case.
inline NullSolution solve_null_steering(const ArrayGeometry& geom, const GeometryGap& gap,
                                        const FrequencyLimits& limits, const LinkBudget& budget) {
  if (gap.delta_u == 0.0 && gap.delta_r_m == 0.0) {
    throw WrongCase("Bob and Eve are coincident; no null-steering case applies");
  }
  if (gap.delta_u == 0.0) return solve_case_same_angle(geom, gap, limits, budget);
  if (gap.delta_r_m == 0.0) return solve_case_same_range(geom, gap, limits, budget);
  return solve_case_general(geom, gap, limits, budget);
}

/// Closed-form secrecy-rate gaps of the frequency-switching solution against
/// the movable-antenna and fixed-array benchmarks, per geometric case.
struct PerformanceGaps {
  double gap_vs_ma = 0.0;
  double gap_vs_fpa = 0.0;
  // Populated for the same-range case only.
  std::optional<double> fpa_correlation;        // I(delta_u) at the base carrier
  std::optional<double> fpa_threshold;          // I_th(delta_u)
  std::optional<bool> carrier_switch_beneficial;  // I >= I_th
};

inline PerformanceGaps performance_gaps(const ArrayGeometry& geom, const GeometryGap& gap,
                                        const NullSolution& solution, const LinkBudget& budget) {
  if (!solution.feasible) {
    throw WrongCase("performance gaps are defined for feasible null solutions");
  }
  const double log2e = 1.0 / std::log(2.0);
  PerformanceGaps gaps;
  switch (solution.case_id) {
    case NullCase::SameAngle: {
      const double gain = std::min(std::log1p(budget.p_eve_w / budget.noise_w),
                                   std::log1p(budget.p_bob_w / budget.noise_w)) *
                          log2e;
      gaps.gap_vs_ma = gain;
      gaps.gap_vs_fpa = gain;
      return gaps;
    }
    case NullCase::SameRange: {
      const double n = geom.n_antennas();
      const double q = 0.25 * n * n * gap.delta_u * gap.delta_u;
      const double pb = budget.p_bob_w;
      const double s2 = budget.noise_w;
      const double correlation = correlation_closed_form(
          geom, geom.base_frequency_hz(), 0.0, gap.delta_u, 0.0);
      gaps.gap_vs_ma = std::log2((q * pb + s2) / (pb + s2));
      gaps.gap_vs_fpa =
          std::log2((q * pb + s2) * (correlation * pb + s2) / (s2 * (pb + s2)));
      gaps.fpa_correlation = correlation;
      gaps.fpa_threshold = (1.0 - q) * s2 / (q * pb + s2);
      gaps.carrier_switch_beneficial = correlation >= *gaps.fpa_threshold;
      return gaps;
    }
    default:
      throw WrongCase("closed-form gaps exist for the same-angle and same-range cases only");
  }
}

/// Ladder increments [df, 2 df, ..., N df] realizing a null solution.
inline Eigen::VectorXd ladder_increments(const ArrayGeometry& geom, double delta_f_hz) {
  Eigen::VectorXd inc(geom.n_antennas());
  for (int n = 1; n <= geom.n_antennas(); ++n) inc[n - 1] = n * delta_f_hz;
  return inc;
}

}  // namespace fsa
