#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fsa/channel.hpp"
#include "fsa/metrics.hpp"
#include "fsa/terminal.hpp"

namespace fsa {

/// One terminal's channel split h = h_bar (x + j y): unit-modulus phase parts
/// and the scalar effective gain.
struct TerminalParts {
  Eigen::VectorXd x;  // cos of the per-antenna steering phase
  Eigen::VectorXd y;  // sin of the per-antenna steering phase
  std::complex<double> effective_gain;  // gamma_c g_f0 e^{j 2 pi f_c r / c}
  double gamma_tilde = 0.0;             // |effective_gain|^2 / sigma^2
  double gamma_hat = 0.0;               // |g_f0|^2 f0^2 / sigma^2
  double range_m = 0.0;
  double spatial_angle = 0.0;
};

/// Real-valued decomposition of the beamformer and all channels used by the
/// closed-form gradients: w = u + j v, C = uu^T + vv^T, D = uv^T - vu^T.
struct RealDecomposition {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;
  TerminalParts bob;
  std::vector<TerminalParts> eves;
  double carrier_hz = 0.0;
  double time_s = 0.0;
};

/// g(x, y) = x^T C x + y^T C y + 2 x^T D y; equals |h^H w|^2 / |h_bar|^2.
inline double quadratic_gain(const RealDecomposition& d, const TerminalParts& p) {
  return p.x.dot(d.C * p.x) + p.y.dot(d.C * p.y) + 2.0 * p.x.dot(d.D * p.y);
}

namespace detail {

inline TerminalParts make_terminal_parts(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                         const Terminal& site, double noise_w, double t_s) {
  TerminalParts p;
  const Eigen::VectorXd phases = steering_phases(
      geom, plan.carrier_hz(), plan.increments_hz(), site.spatial_angle(), site.range_m(), t_s);
  p.x = phases.array().cos();
  p.y = phases.array().sin();
  const double gamma_c = plan.attenuation_factor(geom);
  p.effective_gain = gamma_c * site.path_gain_f0() *
                     std::polar(1.0, kTwoPi * plan.carrier_hz() * site.range_m() / kSpeedOfLight);
  p.gamma_tilde = std::norm(p.effective_gain) / noise_w;
  const double f0 = geom.base_frequency_hz();
  p.gamma_hat = std::norm(site.path_gain_f0()) * f0 * f0 / noise_w;
  p.range_m = site.range_m();
  p.spatial_angle = site.spatial_angle();
  return p;
}

}  // namespace detail

inline RealDecomposition decompose(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                   const Scenario& scenario, const Beamformer& w,
                                   double t_s = 0.0) {
  RealDecomposition d;
  d.u = w.weights.real();
  d.v = w.weights.imag();
  d.C = d.u * d.u.transpose() + d.v * d.v.transpose();
  d.D = d.u * d.v.transpose() - d.v * d.u.transpose();
  d.bob = detail::make_terminal_parts(geom, plan, scenario.bob(), scenario.noise_power_w(), t_s);
  d.eves.reserve(scenario.eves().size());
  for (const Terminal& eve : scenario.eves()) {
    d.eves.push_back(
        detail::make_terminal_parts(geom, plan, eve, scenario.noise_power_w(), t_s));
  }
  d.carrier_hz = plan.carrier_hz();
  d.time_s = t_s;
  return d;
}

namespace detail {

/// d g / d Delta_f for one terminal. The phase derivative w.r.t. the n-th
/// increment is -2 pi (r/c - t), so with X = diag{2 pi (r/c - t) y_n} and
/// Y = diag{-2 pi (r/c - t) x_n}:
///   grad g = X (2 C x + 2 D y) + Y (2 C y + 2 D^T x).
inline Eigen::VectorXd grad_gain_fiv(const RealDecomposition& d, const TerminalParts& p) {
  const double factor = kTwoPi * (p.range_m / kSpeedOfLight - d.time_s);
  const Eigen::VectorXd gx = 2.0 * (d.C * p.x) + 2.0 * (d.D * p.y);
  const Eigen::VectorXd gy = 2.0 * (d.C * p.y) + 2.0 * (d.D.transpose() * p.x);
  return factor * (p.y.cwiseProduct(gx) - p.x.cwiseProduct(gy));
}

/// d g / d f_c for one terminal, phase part only. alpha_n = -(2 pi / c)
/// delta_n d0 sin(theta); the attenuation part is handled by the caller.
inline double grad_gain_carrier(const ArrayGeometry& geom, const RealDecomposition& d,
                                const TerminalParts& p) {
  const Eigen::VectorXd alpha =
      (-kTwoPi / kSpeedOfLight * p.spatial_angle) * geom.element_positions_m();
  const Eigen::VectorXd gx = 2.0 * (d.C * p.x) + 2.0 * (d.D * p.y);
  const Eigen::VectorXd gy = 2.0 * (d.C * p.y) + 2.0 * (d.D.transpose() * p.x);
  return alpha.cwiseProduct(p.y).dot(gx) - alpha.cwiseProduct(p.x).dot(gy);
}

}  // namespace detail

/// Closed-form gradient of the unclamped secrecy objective with respect to
/// the frequency-increment vector, the beamformer held fixed.
inline Eigen::VectorXd grad_fiv(const RealDecomposition& d) {
  const double ln2 = std::log(2.0);
  const double bob_gain = quadratic_gain(d, d.bob);
  Eigen::VectorXd grad =
      (d.bob.gamma_tilde / (ln2 * (1.0 + d.bob.gamma_tilde * bob_gain))) *
      detail::grad_gain_fiv(d, d.bob);

  double eve_total = 0.0;
  Eigen::VectorXd eve_grad = Eigen::VectorXd::Zero(grad.size());
  for (const TerminalParts& eve : d.eves) {
    eve_total += eve.gamma_tilde * quadratic_gain(d, eve);
    eve_grad += eve.gamma_tilde * detail::grad_gain_fiv(d, eve);
  }
  grad -= eve_grad / (ln2 * (1.0 + eve_total));
  return grad;
}

/// Closed-form gradient of the unclamped secrecy objective with respect to
/// the carrier frequency, combining the phase-sensitivity terms with the
/// -2 gamma_hat / f_c^3 attenuation terms.
inline double grad_carrier(const ArrayGeometry& geom, const RealDecomposition& d) {
  const double ln2 = std::log(2.0);
  const double fc = d.carrier_hz;
  const double fc2 = fc * fc;
  const double fc3 = fc2 * fc;

  const double bob_gain = quadratic_gain(d, d.bob);
  const double bob_numerator =
      d.bob.gamma_hat / fc2 * detail::grad_gain_carrier(geom, d, d.bob) -
      2.0 * d.bob.gamma_hat / fc3 * bob_gain;
  double grad = bob_numerator / (ln2 * (1.0 + d.bob.gamma_hat / fc2 * bob_gain));

  double eve_total = 0.0;
  double eve_numerator = 0.0;
  for (const TerminalParts& eve : d.eves) {
    const double gain = quadratic_gain(d, eve);
    eve_total += eve.gamma_hat / fc2 * gain;
    eve_numerator += eve.gamma_hat / fc2 * detail::grad_gain_carrier(geom, d, eve) -
                     2.0 * eve.gamma_hat / fc3 * gain;
  }
  grad -= eve_numerator / (ln2 * (1.0 + eve_total));
  return grad;
}

/// Unclamped R_B - R_E for a fixed beamformer, the PGA block objective.
inline double unclamped_objective(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                  const Scenario& scenario, const Beamformer& w,
                                  double t_s = 0.0) {
  return secrecy_rate(geom, plan, scenario, w, t_s).unclamped_difference;
}

}  // namespace fsa
