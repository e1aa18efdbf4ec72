#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "fsa/decomposition.hpp"
#include "fsa/errors.hpp"
#include "fsa/metrics.hpp"
#include "fsa/pga.hpp"
#include "fsa/rng.hpp"

namespace fsa {

struct OptimizerConfig {
  int max_bcd_iters = 200;
  int pga_max_iters = 400;
  double initial_step = 1.0;   // in normalized block coordinates
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double min_step = 1e-12;
  double objective_tol_bps_hz = 1e-6;
  int multistart_count = 4;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (max_bcd_iters < 1 || pga_max_iters < 1 || multistart_count < 1) {
      throw ValidationError("optimizer iteration/start counts must be positive");
    }
    if (!(initial_step > 0.0) || !(min_step > 0.0) || !(objective_tol_bps_hz > 0.0)) {
      throw ValidationError("optimizer steps and tolerance must be positive");
    }
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0) ||
        !(armijo_slope > 0.0 && armijo_slope < 1.0)) {
      throw ValidationError("armijo parameters must lie in (0, 1)");
    }
  }

  /// Block subproblems stop one decade below the outer tolerance: tight
  /// enough that a block hands a near-conditional optimum to the next one,
  /// loose enough that the outer loop can settle instead of chasing the
  /// block-coupling ridge forever.
  PgaConfig pga() const {
    return PgaConfig{pga_max_iters, initial_step, armijo_shrink, armijo_slope, min_step,
                     0.1 * objective_tol_bps_hz};
  }
};

struct IterationRecord {
  int iteration = 0;
  double objective_bps_hz = 0.0;  // unclamped R_B - R_E after all blocks
  double carrier_hz = 0.0;
  Eigen::VectorXd increments_hz;
  double beamformer_gain = 0.0;
  double fiv_gain = 0.0;
  double carrier_gain = 0.0;
  double extrapolation_gain = 0.0;
  int fiv_steps = 0;
  int carrier_steps = 0;
  double fiv_step_size = 0.0;
  double carrier_step_size = 0.0;
};

struct OptimizationTrace {
  std::vector<IterationRecord> iterations;
  int start_index = 0;
  bool converged = false;
  double final_objective_bps_hz = 0.0;
};

struct FsaSolveResult {
  FrequencyPlan plan;
  Beamformer beamformer;
  SecrecyReport report;
  OptimizationTrace trace;
  bool converged = false;
  int iterations = 0;
};

/// Convergence ceiling for any feasible point: R_B alone at unit attenuation
/// and full array gain, log2(1 + N P_max |g_B|^2 / sigma^2).
inline double secrecy_upper_bound(const ArrayGeometry& geom, const Scenario& scenario) {
  const double p_bob = scenario.power_budget_w() * geom.n_antennas() *
                       std::norm(scenario.bob().path_gain_f0());
  return std::log1p(p_bob / scenario.noise_power_w()) / std::log(2.0);
}

namespace detail {

inline Beamformer rayleigh_at(const ArrayGeometry& geom, const FrequencyPlan& plan,
                              const Scenario& scenario, double t_s) {
  const ChannelVector h_b = channel_bob(geom, plan, scenario.bob(), t_s);
  std::vector<ChannelVector> h_e;
  h_e.reserve(scenario.eves().size());
  for (const Terminal& eve : scenario.eves()) h_e.push_back(channel_eve(geom, plan, eve, t_s));
  return optimal_beamformer_rayleigh(scenario, h_b, h_e, scenario.power_budget_w());
}

/// One BCD run from a given start. Blocks are visited in the fixed order
/// beamformer -> increments -> carrier; each is individually monotone, so the
/// outer objective never decreases.
inline std::pair<FsaSolveResult, OptimizationTrace> bcd_run_single(
    const ArrayGeometry& geom, const Scenario& scenario, const FrequencyLimits& limits,
    const OptimizerConfig& config, Eigen::VectorXd increments_hz, double carrier_hz,
    bool optimize_carrier, int start_index, double t_s) {
  const double f0 = geom.base_frequency_hz();
  const double df_max = limits.increment_max_hz;
  const double carrier_span = limits.carrier_max_hz - f0;

  auto make_plan = [&](const Eigen::VectorXd& inc, double fc) {
    return FrequencyPlan(geom, fc, inc, limits);
  };

  OptimizationTrace trace;
  trace.start_index = start_index;

  Beamformer w = rayleigh_at(geom, make_plan(increments_hz, carrier_hz), scenario, t_s);
  double objective = unclamped_objective(geom, make_plan(increments_hz, carrier_hz), scenario,
                                         w, t_s);

  Eigen::VectorXd prev_increments = increments_hz;
  double prev_carrier = carrier_hz;
  for (int outer = 1; outer <= config.max_bcd_iters; ++outer) {
    IterationRecord record;
    record.iteration = outer;

    // beamformer block: shifted-pencil generalized eigenvector
    w = rayleigh_at(geom, make_plan(increments_hz, carrier_hz), scenario, t_s);
    double block_objective =
        unclamped_objective(geom, make_plan(increments_hz, carrier_hz), scenario, w, t_s);
    record.beamformer_gain = block_objective - objective;

    // increment block: PGA on xi = Delta_f / df_max
    if (df_max > 0.0) {
      auto obj = [&](const Eigen::VectorXd& xi) {
        return unclamped_objective(geom, make_plan(xi * df_max, carrier_hz), scenario, w, t_s);
      };
      auto grad = [&](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
        const RealDecomposition d =
            decompose(geom, make_plan(xi * df_max, carrier_hz), scenario, w, t_s);
        return grad_fiv(d) * df_max;
      };
      auto project = [](const Eigen::VectorXd& xi) { return project_fiv(xi, 1.0); };
      const PgaResult res =
          pga_block(obj, grad, project, increments_hz / df_max, config.pga());
      increments_hz = res.point * df_max;
      record.fiv_gain = res.objective - block_objective;
      record.fiv_steps = res.accepted_steps;
      record.fiv_step_size = res.last_step;
      block_objective = res.objective;
    }

    // carrier block: PGA on phi = (f_c - f0) / (f_H - f0)
    if (optimize_carrier && carrier_span > 0.0) {
      auto obj = [&](const Eigen::VectorXd& phi) {
        return unclamped_objective(geom, make_plan(increments_hz, f0 + phi[0] * carrier_span),
                                   scenario, w, t_s);
      };
      auto grad = [&](const Eigen::VectorXd& phi) -> Eigen::VectorXd {
        const RealDecomposition d = decompose(
            geom, make_plan(increments_hz, f0 + phi[0] * carrier_span), scenario, w, t_s);
        Eigen::VectorXd g(1);
        g[0] = grad_carrier(geom, d) * carrier_span;
        return g;
      };
      auto project = [](const Eigen::VectorXd& phi) {
        return Eigen::VectorXd::Constant(1, std::clamp(phi[0], 0.0, 1.0)).eval();
      };
      Eigen::VectorXd phi0(1);
      phi0[0] = (carrier_hz - f0) / carrier_span;
      const PgaResult res = pga_block(obj, grad, project, phi0, config.pga());
      carrier_hz = f0 + res.point[0] * carrier_span;
      record.carrier_gain = res.objective - block_objective;
      record.carrier_steps = res.accepted_steps;
      record.carrier_step_size = res.last_step;
      block_objective = res.objective;
    }

    // Block alternation creeps along the ridge where the beamformer tracks
    // the frequency variables; an extrapolated jump along the iterate
    // direction, accepted only on improvement, collapses that creep while
    // keeping the trace monotone.
    if (outer >= 2) {
      for (const double amplify : {64.0, 16.0, 4.0, 1.0}) {
        const Eigen::VectorXd inc_try =
            project_fiv(increments_hz + amplify * (increments_hz - prev_increments), df_max);
        const double fc_try = project_carrier(
            carrier_hz + amplify * (carrier_hz - prev_carrier), f0, limits.carrier_max_hz);
        const Beamformer w_try = rayleigh_at(geom, make_plan(inc_try, fc_try), scenario, t_s);
        const double value =
            unclamped_objective(geom, make_plan(inc_try, fc_try), scenario, w_try, t_s);
        if (value > block_objective) {
          record.extrapolation_gain = value - block_objective;
          increments_hz = inc_try;
          carrier_hz = fc_try;
          w = w_try;
          block_objective = value;
          break;
        }
      }
    }
    prev_increments = increments_hz;
    prev_carrier = carrier_hz;

    const double improvement = block_objective - objective;
    objective = block_objective;
    record.objective_bps_hz = objective;
    record.carrier_hz = carrier_hz;
    record.increments_hz = increments_hz;
    trace.iterations.push_back(std::move(record));

    if (improvement < config.objective_tol_bps_hz) {
      trace.converged = true;
      break;
    }
  }
  trace.final_objective_bps_hz = objective;

  FsaSolveResult result{make_plan(increments_hz, carrier_hz), w,
                        secrecy_rate(geom, make_plan(increments_hz, carrier_hz), scenario, w,
                                     t_s),
                        trace, trace.converged, static_cast<int>(trace.iterations.size())};
  return {std::move(result), trace};
}

inline FsaSolveResult bcd_solve_impl(const ArrayGeometry& geom, const Scenario& scenario,
                                     const FrequencyLimits& limits,
                                     const OptimizerConfig& config, bool optimize_carrier,
                                     double t_s) {
  config.validate();
  const int n = geom.n_antennas();
  const double f0 = geom.base_frequency_hz();

  // Start 0 is the fixed-position point. Random starts draw increments in
  // the box but keep the carrier at f0: the attenuation factor makes high
  // starting carriers strictly worse, and a base-carrier start lets the
  // carrier block climb only when decorrelation pays for the path loss.
  // Every start also runs a carrier-frozen twin so the returned best can
  // never fall below what the restricted search space achieves.
  std::vector<FsaSolveResult> results;
  results.reserve(2 * config.multistart_count);
  for (int start = 0; start < config.multistart_count; ++start) {
    Eigen::VectorXd increments = Eigen::VectorXd::Zero(n);
    if (start > 0) {
      Rng rng(mix_seed(config.rng_seed, static_cast<std::uint64_t>(start)));
      for (int i = 0; i < n; ++i) increments[i] = rng.uniform(0.0, limits.increment_max_hz);
    }
    results.push_back(bcd_run_single(geom, scenario, limits, config, increments, f0,
                                     optimize_carrier, start, t_s)
                          .first);
    if (optimize_carrier) {
      results.push_back(bcd_run_single(geom, scenario, limits, config, increments, f0, false,
                                       start, t_s)
                            .first);
    }
  }

  int best = 0;
  for (int i = 1; i < static_cast<int>(results.size()); ++i) {
    if (results[i].trace.final_objective_bps_hz >
        results[best].trace.final_objective_bps_hz) {
      best = i;
    }
  }
  return results[best];
}

}  // namespace detail

/// Secrecy-rate maximization over {beamformer, increments, carrier} by block
/// coordinate descent. Start 0 is the fixed-position operating point; the
/// remaining starts draw uniformly inside the frequency box. Deterministic
/// for a fixed rng_seed.
inline FsaSolveResult bcd_solve(const ArrayGeometry& geom, const Scenario& scenario,
                                const FrequencyLimits& limits, const OptimizerConfig& config,
                                double t_s = 0.0) {
  return detail::bcd_solve_impl(geom, scenario, limits, config, true, t_s);
}

}  // namespace fsa
