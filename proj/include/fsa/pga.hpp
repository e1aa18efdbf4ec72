#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>

#include "fsa/errors.hpp"

namespace fsa {

/// Entrywise clamp of a frequency-increment candidate to [0, df_max].
inline Eigen::VectorXd project_fiv(const Eigen::VectorXd& candidate, double increment_max_hz) {
  return candidate.cwiseMax(0.0).cwiseMin(increment_max_hz);
}

/// Clamp of a carrier candidate to [f0, f_H].
inline double project_carrier(double candidate, double f0_hz, double carrier_max_hz) {
  return std::clamp(candidate, f0_hz, carrier_max_hz);
}

struct PgaConfig {
  int max_iters = 40;
  double initial_step = 1.0;
  double shrink = 0.5;        // backtracking factor, in (0, 1)
  double slope = 1e-4;        // Armijo sufficient-increase fraction, in (0, 1)
  double min_step = 1e-12;
  double tol = 1e-9;          // stop after two consecutive accepted steps below this
  double growth = 2.0;        // warm-start factor on the last accepted step
  double max_step = 1e6;
};

enum class PgaStatus {
  Converged,      // projected gradient vanished or improvement fell below tol
  MaxIterations,  // iteration budget exhausted while still improving
  Stalled,        // backtracking hit min_step on the first iteration
};

struct PgaResult {
  Eigen::VectorXd point;
  double objective = 0.0;
  int iterations = 0;
  int accepted_steps = 0;
  double last_step = 0.0;
  PgaStatus status = PgaStatus::Converged;
};

/// Projected gradient ascent with Armijo backtracking along the projection
/// arc: a candidate proj(x + step * g) is accepted when
///   f(candidate) >= f(x) + slope * <g, candidate - x>.
/// Accepted steps are monotone by construction. The trial step uses the
/// Barzilai-Borwein spectral value from the previous accepted step when it is
/// usable, falling back to the last step scaled by `growth`.
inline PgaResult pga_block(const std::function<double(const Eigen::VectorXd&)>& objective,
                           const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                           const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project,
                           const Eigen::VectorXd& start, const PgaConfig& config) {
  PgaResult result;
  result.point = project(start);
  result.objective = objective(result.point);

  double fallback_step = config.initial_step;
  int small_improvements = 0;
  Eigen::VectorXd prev_point;
  Eigen::VectorXd prev_gradient;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    result.iterations = iter;
    const Eigen::VectorXd g = gradient(result.point);

    double trial = fallback_step;
    if (prev_point.size() > 0) {
      const Eigen::VectorXd s = result.point - prev_point;
      const double curvature = -s.dot(g - prev_gradient);  // > 0 where locally concave
      if (curvature > 0.0) {
        trial = std::clamp(s.squaredNorm() / curvature, config.min_step, config.max_step);
      }
    }
    prev_point = result.point;
    prev_gradient = g;

    bool accepted = false;
    double step = trial;
    while (step >= config.min_step) {
      const Eigen::VectorXd candidate = project(result.point + step * g);
      const Eigen::VectorXd direction = candidate - result.point;
      if (direction.lpNorm<Eigen::Infinity>() == 0.0) break;  // projected gradient is zero
      const double value = objective(candidate);
      if (value >= result.objective + config.slope * g.dot(direction)) {
        const double improvement = value - result.objective;
        result.point = candidate;
        result.objective = value;
        result.last_step = step;
        ++result.accepted_steps;
        accepted = true;
        fallback_step = std::min(step * config.growth, config.max_step);
        small_improvements = improvement < config.tol ? small_improvements + 1 : 0;
        break;
      }
      step *= config.shrink;
    }

    if (!accepted) {
      result.status = iter == 1 && step < config.min_step ? PgaStatus::Stalled
                                                          : PgaStatus::Converged;
      return result;
    }
    if (small_improvements >= 2) {
      result.status = PgaStatus::Converged;
      return result;
    }
  }
  result.status = PgaStatus::MaxIterations;
  return result;
}

}  // namespace fsa
