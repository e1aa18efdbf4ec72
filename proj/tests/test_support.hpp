#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fsa/fsa.hpp"

namespace fsa::test {

/// Limits wide enough to hold a full ladder [df, 2df, ..., N df] while still
/// satisfying the increment << carrier assumption.
inline FrequencyLimits wide_limits(const ArrayGeometry& geom, double ladder_seed_hz,
                                   double carrier_max_hz = 0.0) {
  const double top = geom.n_antennas() * ladder_seed_hz;
  const double carrier = std::max({carrier_max_hz, 2.0 * geom.base_frequency_hz(), 1e3 * top});
  return FrequencyLimits{carrier, top};
}

inline FrequencyPlan ladder_plan(const ArrayGeometry& geom, double carrier_hz,
                                 double ladder_seed_hz, double carrier_max_hz = 0.0) {
  return FrequencyPlan::uniform_ladder(geom, carrier_hz, ladder_seed_hz,
                                       wide_limits(geom, ladder_seed_hz, carrier_max_hz));
}

/// Independent entrywise re-evaluation of the steering phase formula, kept
/// deliberately separate from the library's vectorized path.
inline std::complex<double> steering_entry_oracle(int n_antennas, int index_1based,
                                                  double base_frequency_hz, double carrier_hz,
                                                  double increment_hz, double spatial_angle,
                                                  double range_m, double t_s) {
  const double delta = (2.0 * index_1based - n_antennas - 1.0) / 2.0;
  const double d0 = kSpeedOfLight / (2.0 * base_frequency_hz);
  const double phase =
      kTwoPi * (carrier_hz * delta * d0 * spatial_angle / kSpeedOfLight -
                increment_hz * range_m / kSpeedOfLight + increment_hz * t_s);
  return std::polar(1.0 / std::sqrt(static_cast<double>(n_antennas)), phase);
}

/// Power iteration on the shifted pencil (A + I/P, B + I/P): an eigensolver
/// route independent of the library's generalized eigendecomposition.
inline double rayleigh_objective_power_iteration(const Scenario& scenario,
                                                 const ChannelVector& h_bob,
                                                 const std::vector<ChannelVector>& h_eves,
                                                 double power_budget_w, int iters = 2000) {
  const Eigen::Index n = h_bob.entries.size();
  const double inv_s2 = 1.0 / scenario.noise_power_w();
  Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Identity(n, n) / power_budget_w;
  m1 += inv_s2 * (h_bob.entries * h_bob.entries.adjoint());
  Eigen::MatrixXcd m2 = Eigen::MatrixXcd::Identity(n, n) / power_budget_w;
  for (const ChannelVector& h : h_eves) m2 += inv_s2 * (h.entries * h.entries.adjoint());

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m2);
  Eigen::VectorXcd z = h_bob.entries.normalized();
  for (int k = 0; k < iters; ++k) {
    z = lu.solve(m1 * z);
    z.normalize();
  }
  const std::complex<double> num = z.dot(m1 * z);
  const std::complex<double> den = z.dot(m2 * z);
  return num.real() / den.real();
}

/// Quotient value (w^H A w + 1) / (w^H B w + 1) for a concrete beamformer.
inline double rayleigh_objective_of(const Scenario& scenario, const ChannelVector& h_bob,
                                    const std::vector<ChannelVector>& h_eves,
                                    const Beamformer& w) {
  const double inv_s2 = 1.0 / scenario.noise_power_w();
  double num = 1.0 + inv_s2 * std::norm(h_bob.entries.dot(w.weights));
  double den = 1.0;
  for (const ChannelVector& h : h_eves) den += inv_s2 * std::norm(h.entries.dot(w.weights));
  return num / den;
}

}  // namespace fsa::test
