#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fsa/bcd.hpp"
#include "fsa/decomposition.hpp"
#include "fsa/errors.hpp"
#include "fsa/metrics.hpp"
#include "fsa/pga.hpp"
#include "fsa/rng.hpp"

namespace fsa {

/// Movable-antenna element layout inside a centered region of length L.
class MaConfiguration {
 public:
  MaConfiguration(Eigen::VectorXd positions_m, double region_length_m, double min_spacing_m)
      : positions_m_(std::move(positions_m)),
        region_length_m_(region_length_m),
        min_spacing_m_(min_spacing_m) {
    const double slack = 1e-9 * std::max(1.0, region_length_m_);
    const double half = region_length_m_ / 2.0;
    for (Eigen::Index i = 0; i < positions_m_.size(); ++i) {
      if (positions_m_[i] < -half - slack || positions_m_[i] > half + slack) {
        throw ValidationError("MA position outside the movable region");
      }
      if (i > 0 && positions_m_[i] - positions_m_[i - 1] < min_spacing_m_ - slack) {
        throw ValidationError("MA positions violate the minimum spacing");
      }
    }
  }

  const Eigen::VectorXd& positions_m() const { return positions_m_; }
  double region_length_m() const { return region_length_m_; }
  double min_spacing_m() const { return min_spacing_m_; }

 private:
  Eigen::VectorXd positions_m_;
  double region_length_m_;
  double min_spacing_m_;
};

/// Fairness rule tying the MA region to the carrier headroom: L = (f_H/f0) N d0.
inline double ma_region_length(const ArrayGeometry& geom, const FrequencyLimits& limits) {
  return limits.carrier_max_hz / geom.base_frequency_hz() * geom.aperture_m();
}

/// Restores feasibility of a position candidate: sort, push apart greedily
/// left to right, then pull back from the right edge. Feasible by
/// construction whenever (N - 1) spacing <= L.
inline Eigen::VectorXd ma_project_positions(const Eigen::VectorXd& candidate,
                                            double region_length_m, double min_spacing_m) {
  const double half = region_length_m / 2.0;
  Eigen::VectorXd p = candidate;
  std::sort(p.data(), p.data() + p.size());
  p[0] = std::max(p[0], -half);
  for (Eigen::Index i = 1; i < p.size(); ++i) {
    p[i] = std::max(p[i], p[i - 1] + min_spacing_m);
  }
  if (p[p.size() - 1] > half) {
    p[p.size() - 1] = half;
    for (Eigen::Index i = p.size() - 2; i >= 0; --i) {
      p[i] = std::min(p[i], p[i + 1] - min_spacing_m);
    }
  }
  return p;
}

/// Far-field MA channel response at the base carrier: range enters only the
/// common phase, so same-angle users stay fully correlated no matter where
/// the elements move.
inline ChannelVector ma_channel(const ArrayGeometry& geom, const Eigen::VectorXd& positions_m,
                                const Terminal& site) {
  const double f0 = geom.base_frequency_hz();
  const double scale = 1.0 / std::sqrt(static_cast<double>(geom.n_antennas()));
  const std::complex<double> common =
      std::sqrt(static_cast<double>(geom.n_antennas())) * site.path_gain_f0() *
      std::polar(1.0, kTwoPi * f0 * site.range_m() / kSpeedOfLight);
  ChannelVector h;
  h.entries.resize(positions_m.size());
  for (Eigen::Index n = 0; n < positions_m.size(); ++n) {
    h.entries[n] =
        common * std::polar(scale, kTwoPi * f0 * positions_m[n] * site.spatial_angle() /
                                       kSpeedOfLight);
  }
  h.attenuation_factor = 1.0;
  return h;
}

struct FpaSolveResult {
  FrequencyPlan plan;
  Beamformer beamformer;
  SecrecyReport report;
};

/// Fixed-position baseline: base carrier, zero increments, optimal beamformer.
inline FpaSolveResult fpa_solve(const ArrayGeometry& geom, const Scenario& scenario,
                                const FrequencyLimits& limits, double t_s = 0.0) {
  const FrequencyPlan plan = FrequencyPlan::fixed_position(geom, limits);
  const Beamformer w = detail::rayleigh_at(geom, plan, scenario, t_s);
  return FpaSolveResult{plan, w, secrecy_rate(geom, plan, scenario, w, t_s)};
}

/// Frequency-diverse baseline: the full BCD solver with the carrier frozen at
/// the base frequency.
inline FsaSolveResult fda_solve(const ArrayGeometry& geom, const Scenario& scenario,
                                const FrequencyLimits& limits, const OptimizerConfig& config,
                                double t_s = 0.0) {
  return detail::bcd_solve_impl(geom, scenario, limits, config, false, t_s);
}

struct MaSolveResult {
  MaConfiguration configuration;
  Beamformer beamformer;
  SecrecyReport report;
  OptimizationTrace trace;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

struct MaTerminalParts {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double gamma = 0.0;         // |g_f0|^2 / sigma^2
  double phase_slope = 0.0;   // 2 pi f0 sin(theta) / c, d(phase)/d(position)
};

inline MaTerminalParts ma_terminal_parts(const ArrayGeometry& geom,
                                         const Eigen::VectorXd& positions_m,
                                         const Terminal& site, double noise_w) {
  MaTerminalParts p;
  p.phase_slope = kTwoPi * geom.base_frequency_hz() * site.spatial_angle() / kSpeedOfLight;
  const Eigen::VectorXd phases = p.phase_slope * positions_m;
  p.x = phases.array().cos();
  p.y = phases.array().sin();
  p.gamma = std::norm(site.path_gain_f0()) / noise_w;
  return p;
}

inline double ma_unclamped(const ArrayGeometry& geom, const Eigen::VectorXd& positions_m,
                           const Scenario& scenario, const Beamformer& w) {
  const ChannelVector h_b = ma_channel(geom, positions_m, scenario.bob());
  std::vector<ChannelVector> h_e;
  h_e.reserve(scenario.eves().size());
  for (const Terminal& eve : scenario.eves()) h_e.push_back(ma_channel(geom, positions_m, eve));
  return rate_bob(scenario, h_b, w) - rate_eves(scenario, h_e, w);
}

inline Beamformer ma_rayleigh(const ArrayGeometry& geom, const Eigen::VectorXd& positions_m,
                              const Scenario& scenario) {
  const ChannelVector h_b = ma_channel(geom, positions_m, scenario.bob());
  std::vector<ChannelVector> h_e;
  h_e.reserve(scenario.eves().size());
  for (const Terminal& eve : scenario.eves()) h_e.push_back(ma_channel(geom, positions_m, eve));
  return optimal_beamformer_rayleigh(scenario, h_b, h_e, scenario.power_budget_w());
}

/// Gradient of the unclamped objective with respect to the element positions.
/// The per-terminal phase slope is constant across elements, so
/// d g / d pos_n = slope * (x_n (2 C y + 2 D^T x)_n - y_n (2 C x + 2 D y)_n).
inline Eigen::VectorXd ma_grad_positions(const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                                         const std::vector<MaTerminalParts>& parts,
                                         int n_eves) {
  const double ln2 = std::log(2.0);
  const auto term_grad = [&](const MaTerminalParts& p) -> Eigen::VectorXd {
    const Eigen::VectorXd gx = 2.0 * (C * p.x) + 2.0 * (D * p.y);
    const Eigen::VectorXd gy = 2.0 * (C * p.y) + 2.0 * (D.transpose() * p.x);
    return p.phase_slope * (p.x.cwiseProduct(gy) - p.y.cwiseProduct(gx));
  };
  const auto term_gain = [&](const MaTerminalParts& p) {
    return p.x.dot(C * p.x) + p.y.dot(C * p.y) + 2.0 * p.x.dot(D * p.y);
  };

  const MaTerminalParts& bob = parts.front();
  Eigen::VectorXd grad =
      (bob.gamma / (ln2 * (1.0 + bob.gamma * term_gain(bob)))) * term_grad(bob);
  double eve_total = 0.0;
  Eigen::VectorXd eve_grad = Eigen::VectorXd::Zero(grad.size());
  for (int m = 1; m <= n_eves; ++m) {
    eve_total += parts[m].gamma * term_gain(parts[m]);
    eve_grad += parts[m].gamma * term_grad(parts[m]);
  }
  grad -= eve_grad / (ln2 * (1.0 + eve_total));
  return grad;
}

}  // namespace detail

/// Movable-antenna benchmark: alternates the optimal beamformer with PGA over
/// the element positions inside the fairness region.
inline MaSolveResult ma_solve(const ArrayGeometry& geom, const Scenario& scenario,
                              const FrequencyLimits& limits, const OptimizerConfig& config,
                              double t_s = 0.0) {
  (void)t_s;  // MA channels are static; kept for interface symmetry
  config.validate();
  const int n = geom.n_antennas();
  const double region = ma_region_length(geom, limits);
  const double spacing = geom.spacing_m();
  if (n * spacing > region) {
    throw InfeasibleSpacing("movable region cannot hold all antennas at min spacing");
  }

  auto run_single = [&](Eigen::VectorXd positions, int start_index) {
    OptimizationTrace trace;
    trace.start_index = start_index;
    Beamformer w = detail::ma_rayleigh(geom, positions, scenario);
    double objective = detail::ma_unclamped(geom, positions, scenario, w);

    Eigen::VectorXd prev_positions = positions;
    for (int outer = 1; outer <= config.max_bcd_iters; ++outer) {
      IterationRecord record;
      record.iteration = outer;

      w = detail::ma_rayleigh(geom, positions, scenario);
      double block_objective = detail::ma_unclamped(geom, positions, scenario, w);
      record.beamformer_gain = block_objective - objective;

      const Eigen::MatrixXd C = w.weights.real() * w.weights.real().transpose() +
                                w.weights.imag() * w.weights.imag().transpose();
      const Eigen::MatrixXd D = w.weights.real() * w.weights.imag().transpose() -
                                w.weights.imag() * w.weights.real().transpose();

      auto obj = [&](const Eigen::VectorXd& q) {
        return detail::ma_unclamped(geom, q * region, scenario, w);
      };
      auto grad = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
        const Eigen::VectorXd pos = q * region;
        std::vector<detail::MaTerminalParts> parts;
        parts.push_back(
            detail::ma_terminal_parts(geom, pos, scenario.bob(), scenario.noise_power_w()));
        for (const Terminal& eve : scenario.eves()) {
          parts.push_back(detail::ma_terminal_parts(geom, pos, eve, scenario.noise_power_w()));
        }
        return detail::ma_grad_positions(C, D, parts, scenario.n_eves()) * region;
      };
      auto project = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
        return ma_project_positions(q * region, region, spacing) / region;
      };
      const PgaResult res = pga_block(obj, grad, project, positions / region, config.pga());
      positions = res.point * region;
      record.fiv_gain = res.objective - block_objective;
      record.fiv_steps = res.accepted_steps;
      record.fiv_step_size = res.last_step;
      block_objective = res.objective;

      // Same ridge-collapsing extrapolation as the frequency optimizer.
      if (outer >= 2) {
        for (const double amplify : {64.0, 16.0, 4.0, 1.0}) {
          const Eigen::VectorXd pos_try = ma_project_positions(
              positions + amplify * (positions - prev_positions), region, spacing);
          const Beamformer w_try = detail::ma_rayleigh(geom, pos_try, scenario);
          const double value = detail::ma_unclamped(geom, pos_try, scenario, w_try);
          if (value > block_objective) {
            record.extrapolation_gain = value - block_objective;
            positions = pos_try;
            w = w_try;
            block_objective = value;
            break;
          }
        }
      }
      prev_positions = positions;

      const double improvement = block_objective - objective;
      objective = block_objective;
      record.objective_bps_hz = objective;
      trace.iterations.push_back(std::move(record));
      if (improvement < config.objective_tol_bps_hz) {
        trace.converged = true;
        break;
      }
    }
    trace.final_objective_bps_hz = objective;
    return std::make_pair(positions, trace);
  };

  Eigen::VectorXd best_positions;
  OptimizationTrace best_trace;
  for (int start = 0; start < config.multistart_count; ++start) {
    Eigen::VectorXd positions;
    if (start == 0) {
      positions = geom.element_positions_m();
    } else {
      Rng rng(mix_seed(config.rng_seed ^ 0x4d41ULL, static_cast<std::uint64_t>(start)));
      positions.resize(n);
      for (int i = 0; i < n; ++i) positions[i] = rng.uniform(-region / 2.0, region / 2.0);
      positions = ma_project_positions(positions, region, spacing);
    }
    auto [pos, trace] = run_single(std::move(positions), start);
    if (start == 0 || trace.final_objective_bps_hz > best_trace.final_objective_bps_hz) {
      best_positions = pos;
      best_trace = trace;
    }
  }

  const Beamformer w = detail::ma_rayleigh(geom, best_positions, scenario);
  const ChannelVector h_b = ma_channel(geom, best_positions, scenario.bob());
  std::vector<ChannelVector> h_e;
  for (const Terminal& eve : scenario.eves()) h_e.push_back(ma_channel(geom, best_positions, eve));

  SecrecyReport report;
  report.rate_bob_bps_hz = rate_bob(scenario, h_b, w);
  report.rate_eves_bps_hz = rate_eves(scenario, h_e, w);
  report.unclamped_difference = report.rate_bob_bps_hz - report.rate_eves_bps_hz;
  report.secrecy_rate_bps_hz = std::max(report.unclamped_difference, 0.0);

  return MaSolveResult{MaConfiguration(best_positions, region, spacing), w, report, best_trace,
                       best_trace.converged, static_cast<int>(best_trace.iterations.size())};
}

}  // namespace fsa
