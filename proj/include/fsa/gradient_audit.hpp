#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "fsa/bcd.hpp"
#include "fsa/decomposition.hpp"
#include "fsa/rng.hpp"

namespace fsa {

/// One randomized interior audit point: geometry, scenario, plan and the
/// Rayleigh beamformer held fixed while a frequency block varies.
struct AuditInstance {
  ArrayGeometry geom;
  Scenario scenario;
  FrequencyLimits limits;
  FrequencyPlan plan;
  Beamformer beamformer;
};

/// Draws N in {3..33} odd, M in {1..4}, moderate-SNR free-space terminals and
/// a frequency point strictly inside the box constraints.
inline AuditInstance random_audit_instance(Rng& rng) {
  const int n = static_cast<int>(2 * rng.uniform_int(1, 16) + 1);  // odd in [3, 33]
  const int m = static_cast<int>(rng.uniform_int(1, 4));
  const double f0 = rng.uniform() < 0.5 ? 30e9 : 60e9;
  ArrayGeometry geom(n, f0);

  auto random_terminal = [&]() {
    const double angle = rng.uniform(-0.5, 0.5);
    const double range = rng.uniform(10.0, 200.0);
    return Terminal(angle, range, default_path_gain(f0, range));
  };
  Terminal bob = random_terminal();
  std::vector<Terminal> eves;
  for (int i = 0; i < m; ++i) eves.push_back(random_terminal());
  Scenario scenario(bob, std::move(eves), 1e-11, rng.uniform(0.5, 2.0));

  const FrequencyLimits limits{2.0 * f0, 4e6};
  Eigen::VectorXd increments(n);
  for (int i = 0; i < n; ++i) {
    increments[i] = rng.uniform(0.1, 0.9) * limits.increment_max_hz;
  }
  const double carrier = rng.uniform(1.1, 1.9) * f0;
  FrequencyPlan plan(geom, carrier, increments, limits);
  Beamformer w = detail::rayleigh_at(geom, plan, scenario, 0.0);
  return AuditInstance{geom, scenario, limits, plan, w};
}

/// Central finite difference of the unclamped objective along one increment.
inline double fd_fiv_entry(const AuditInstance& inst, int entry, double step_hz) {
  Eigen::VectorXd plus = inst.plan.increments_hz();
  Eigen::VectorXd minus = plus;
  plus[entry] += step_hz;
  minus[entry] -= step_hz;
  const FrequencyLimits wide{inst.limits.carrier_max_hz,
                             std::max(inst.limits.increment_max_hz, plus.maxCoeff())};
  const double f_plus = unclamped_objective(
      inst.geom, FrequencyPlan(inst.geom, inst.plan.carrier_hz(), plus, wide), inst.scenario,
      inst.beamformer);
  const double f_minus = unclamped_objective(
      inst.geom, FrequencyPlan(inst.geom, inst.plan.carrier_hz(), minus, wide), inst.scenario,
      inst.beamformer);
  return (f_plus - f_minus) / (2.0 * step_hz);
}

inline double fd_carrier(const AuditInstance& inst, double step_hz) {
  const double f_plus = unclamped_objective(
      inst.geom,
      FrequencyPlan(inst.geom, inst.plan.carrier_hz() + step_hz, inst.plan.increments_hz(),
                    inst.limits),
      inst.scenario, inst.beamformer);
  const double f_minus = unclamped_objective(
      inst.geom,
      FrequencyPlan(inst.geom, inst.plan.carrier_hz() - step_hz, inst.plan.increments_hz(),
                    inst.limits),
      inst.scenario, inst.beamformer);
  return (f_plus - f_minus) / (2.0 * step_hz);
}

struct GradientAuditReport {
  double max_rel_error_fiv = 0.0;
  double max_rel_error_carrier = 0.0;
  int trials = 0;
};

/// Compares both closed-form gradients against central finite differences
/// (1 Hz steps on increments, 1 kHz on the carrier) at random interior
/// points.
inline GradientAuditReport gradient_audit(int trials, std::uint64_t seed) {
  Rng rng(seed);
  GradientAuditReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    const AuditInstance inst = random_audit_instance(rng);
    const RealDecomposition d =
        decompose(inst.geom, inst.plan, inst.scenario, inst.beamformer, 0.0);

    const Eigen::VectorXd analytic = grad_fiv(d);
    Eigen::VectorXd numeric(analytic.size());
    for (int i = 0; i < analytic.size(); ++i) numeric[i] = fd_fiv_entry(inst, i, 1.0);
    const double fiv_rel = (analytic - numeric).norm() / numeric.norm();
    report.max_rel_error_fiv = std::max(report.max_rel_error_fiv, fiv_rel);

    const double carrier_analytic = grad_carrier(inst.geom, d);
    const double carrier_numeric = fd_carrier(inst, 1e3);
    const double carrier_rel =
        std::abs(carrier_analytic - carrier_numeric) / std::abs(carrier_numeric);
    report.max_rel_error_carrier = std::max(report.max_rel_error_carrier, carrier_rel);
  }
  return report;
}

}  // namespace fsa
