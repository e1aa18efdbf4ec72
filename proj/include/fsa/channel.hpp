#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fsa/constants.hpp"
#include "fsa/errors.hpp"
#include "fsa/frequency_plan.hpp"
#include "fsa/geometry.hpp"
#include "fsa/terminal.hpp"

namespace fsa {

/// Far-field LoS channel: sqrt(N) * gamma_c * g_f0 * exp(j 2 pi f_c r / c)
/// times the unit-norm steering vector.
struct ChannelVector {
  Eigen::VectorXcd entries;
  double attenuation_factor = 1.0;  // gamma_c = f0 / f_c

  double norm() const { return entries.norm(); }
};

/// Per-antenna steering phases [rad] toward (u, r) at time t:
/// phi_n = 2 pi (f_c delta_n d0 u / c - Delta_f[n] r / c + Delta_f[n] t).
inline Eigen::VectorXd steering_phases(const ArrayGeometry& geom, double carrier_hz,
                                       const Eigen::VectorXd& increments_hz, double spatial_angle,
                                       double range_m, double t_s) {
  const Eigen::VectorXd positions = geom.element_positions_m();
  return kTwoPi * (carrier_hz * spatial_angle / kSpeedOfLight * positions -
                   (range_m / kSpeedOfLight - t_s) * increments_hz);
}

/// Raw steering vector from explicit frequency parameters (no box checks).
inline Eigen::VectorXcd steering_vector_raw(const ArrayGeometry& geom, double carrier_hz,
                                            const Eigen::VectorXd& increments_hz,
                                            double spatial_angle, double range_m, double t_s) {
  const Eigen::VectorXd phases =
      steering_phases(geom, carrier_hz, increments_hz, spatial_angle, range_m, t_s);
  const double scale = 1.0 / std::sqrt(static_cast<double>(geom.n_antennas()));
  Eigen::VectorXcd a(phases.size());
  for (Eigen::Index n = 0; n < phases.size(); ++n) {
    a[n] = std::polar(scale, phases[n]);
  }
  return a;
}

/// Unit-norm channel steering vector toward a terminal.
inline Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                        const Terminal& site, double t_s = 0.0) {
  return steering_vector_raw(geom, plan.carrier_hz(), plan.increments_hz(), site.spatial_angle(),
                             site.range_m(), t_s);
}

namespace detail {

inline ChannelVector los_channel(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                 const Terminal& site, double t_s) {
  const double gamma_c = plan.attenuation_factor(geom);
  const std::complex<double> common =
      std::sqrt(static_cast<double>(geom.n_antennas())) * gamma_c * site.path_gain_f0() *
      std::polar(1.0, kTwoPi * plan.carrier_hz() * site.range_m() / kSpeedOfLight);
  ChannelVector h;
  h.entries = common * steering_vector(geom, plan, site, t_s);
  h.attenuation_factor = gamma_c;
  return h;
}

}  // namespace detail

inline ChannelVector channel_bob(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                 const Terminal& bob, double t_s = 0.0) {
  return detail::los_channel(geom, plan, bob, t_s);
}

inline ChannelVector channel_eve(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                 const Terminal& eve, double t_s = 0.0) {
  return detail::los_channel(geom, plan, eve, t_s);
}

/// Equivalent element positions of the virtual base-frequency array that the
/// frequency plan synthesizes toward (u, r):
/// y'_n = (f_c/f0) y_n - (Delta_f[n] r - Delta_f[n] t c) / (f0 u).
/// Undefined at broadside (u == 0).
inline Eigen::VectorXd equivalent_positions(const ArrayGeometry& geom, const FrequencyPlan& plan,
                                            const Terminal& site, double t_s = 0.0) {
  const double u = site.spatial_angle();
  if (u == 0.0) {
    throw DegenerateAngle("equivalent_positions is undefined at broadside (sin(theta) = 0)");
  }
  const double f0 = geom.base_frequency_hz();
  const Eigen::VectorXd physical = geom.element_positions_m();
  const Eigen::VectorXd displacement =
      plan.increments_hz() * ((site.range_m() - t_s * kSpeedOfLight) / (f0 * u));
  return (plan.carrier_hz() / f0) * physical - displacement;
}

}  // namespace fsa
