#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "fsa/channel.hpp"
#include "fsa/errors.hpp"
#include "fsa/terminal.hpp"

namespace fsa {

struct Beamformer {
  Eigen::VectorXcd weights;

  double power() const { return weights.squaredNorm(); }

  /// Power constraint ||w||^2 <= P_max (+1e-9 slack for accumulated rounding).
  void validate_power(double power_budget_w) const {
    if (power() > power_budget_w + 1e-9) {
      throw ValidationError("beamformer power exceeds the scenario budget");
    }
  }
};

struct SecrecyReport {
  double rate_bob_bps_hz = 0.0;
  double rate_eves_bps_hz = 0.0;
  double secrecy_rate_bps_hz = 0.0;    // [R_B - R_E]^+
  double unclamped_difference = 0.0;   // R_B - R_E
};

/// Maximum ratio transmission toward Bob: w = sqrt(P_max) * a(bob).
inline Beamformer mrt_beamformer(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                 const Terminal& bob, double power_budget_w, double t_s = 0.0) {
  return Beamformer{std::sqrt(power_budget_w) * steering_vector(geom, plan, bob, t_s)};
}

inline double rate_bob(const Scenario& scenario, const ChannelVector& h_bob,
                       const Beamformer& w) {
  const double signal = std::norm(h_bob.entries.dot(w.weights));
  return std::log1p(signal / scenario.noise_power_w()) / std::log(2.0);
}

inline double rate_eves(const Scenario& scenario, const std::vector<ChannelVector>& h_eves,
                        const Beamformer& w) {
  double intercepted = 0.0;
  for (const ChannelVector& h : h_eves) {
    intercepted += std::norm(h.entries.dot(w.weights));
  }
  return std::log1p(intercepted / scenario.noise_power_w()) / std::log(2.0);
}

inline SecrecyReport secrecy_rate(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                  const Scenario& scenario, const Beamformer& w,
                                  double t_s = 0.0) {
  w.validate_power(scenario.power_budget_w());
  const ChannelVector h_b = channel_bob(geom, plan, scenario.bob(), t_s);
  std::vector<ChannelVector> h_e;
  h_e.reserve(scenario.eves().size());
  for (const Terminal& eve : scenario.eves()) h_e.push_back(channel_eve(geom, plan, eve, t_s));

  SecrecyReport report;
  report.rate_bob_bps_hz = rate_bob(scenario, h_b, w);
  report.rate_eves_bps_hz = rate_eves(scenario, h_e, w);
  report.unclamped_difference = report.rate_bob_bps_hz - report.rate_eves_bps_hz;
  report.secrecy_rate_bps_hz = std::max(report.unclamped_difference, 0.0);
  return report;
}

/// Dirichlet-kernel channel correlation for the uniform-increment ladder
/// Delta_f = [df, 2 df, ..., N df]:
///   G = | sin(N pi psi) / (N sin(pi psi)) |,
///   psi = (f_c / f0) du / 2 - df dr / c.
/// The ratio has removable singularities where sin(pi psi) = 0; the limit
/// value 1 is returned there.
inline double correlation_closed_form(const ArrayGeometry& geom, double carrier_hz,
                                      double delta_f_uniform_hz, double delta_u,
                                      double delta_r_m) {
  const double psi = 0.5 * (carrier_hz / geom.base_frequency_hz()) * delta_u -
                     delta_f_uniform_hz * delta_r_m / kSpeedOfLight;
  const double num = std::sin(geom.n_antennas() * kPi * psi);
  const double den = geom.n_antennas() * std::sin(kPi * psi);
  if (den == 0.0) return 1.0;
  return std::abs(num / den);
}

/// |a^H(bob) a(eve)| by direct inner product of steering vectors.
inline double correlation_bruteforce(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                     const Terminal& bob, const Terminal& eve, double t_s = 0.0) {
  const Eigen::VectorXcd a_b = steering_vector(geom, plan, bob, t_s);
  const Eigen::VectorXcd a_e = steering_vector(geom, plan, eve, t_s);
  return std::abs(a_b.dot(a_e));
}

/// Raw-parameter variant for ladder plans whose entries exceed the box bounds
/// a FrequencyPlan would enforce.
inline double correlation_bruteforce_raw(const ArrayGeometry& geom, double carrier_hz,
                                         const Eigen::VectorXd& increments_hz, const Terminal& bob,
                                         const Terminal& eve, double t_s = 0.0) {
  const Eigen::VectorXcd a_b = steering_vector_raw(geom, carrier_hz, increments_hz,
                                                   bob.spatial_angle(), bob.range_m(), t_s);
  const Eigen::VectorXcd a_e = steering_vector_raw(geom, carrier_hz, increments_hz,
                                                   eve.spatial_angle(), eve.range_m(), t_s);
  return std::abs(a_b.dot(a_e));
}

/// Secrecy-optimal transmit beamformer for fixed channels: the top
/// generalized eigenvector of the shifted pencil
///   (A + I/P_max) c = lambda (B + I/P_max) c,
/// with A = h_B h_B^H / sigma^2 and B = sum_m h_Em h_Em^H / sigma^2,
/// scaled to w = sqrt(P_max) c. The global phase is canonicalized so the
/// largest-magnitude weight is real and nonnegative.
inline Beamformer optimal_beamformer_rayleigh(const Scenario& scenario, const ChannelVector& h_bob,
                                              const std::vector<ChannelVector>& h_eves,
                                              double power_budget_w) {
  const Eigen::Index n = h_bob.entries.size();
  const double inv_sigma2 = 1.0 / scenario.noise_power_w();
  const Eigen::MatrixXcd shift =
      Eigen::MatrixXcd::Identity(n, n) / power_budget_w;

  Eigen::MatrixXcd numerator = shift;
  numerator.noalias() += inv_sigma2 * (h_bob.entries * h_bob.entries.adjoint());
  Eigen::MatrixXcd denominator = shift;
  for (const ChannelVector& h : h_eves) {
    denominator.noalias() += inv_sigma2 * (h.entries * h.entries.adjoint());
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> solver(numerator, denominator);
  if (solver.info() != Eigen::Success) {
    throw SingularSystem("generalized eigensolve failed for the beamformer pencil");
  }
  Eigen::VectorXcd c = solver.eigenvectors().col(n - 1);
  c.normalize();

  Eigen::Index peak = 0;
  c.cwiseAbs().maxCoeff(&peak);
  const std::complex<double> pivot = c[peak];
  if (std::abs(pivot) > 0.0) c *= std::conj(pivot) / std::abs(pivot);

  return Beamformer{std::sqrt(power_budget_w) * c};
}

}  // namespace fsa
