#pragma once

#include <Eigen/Dense>
#include <utility>

#include "fsa/errors.hpp"
#include "fsa/geometry.hpp"

namespace fsa {

/// Box bounds for the switchable carrier and the per-antenna increments.
struct FrequencyLimits {
  double carrier_max_hz = 0.0;    // f_H
  double increment_max_hz = 0.0;  // Delta_f,max
};

/// Per-antenna radiation frequencies f_n = f_c + Delta_f[n]. The increments
/// are assumed small against the carrier; the bound increment_max_hz <=
/// 1e-3 * carrier_max_hz enforces that assumption.
class FrequencyPlan {
 public:
  FrequencyPlan(const ArrayGeometry& geom, double carrier_hz, Eigen::VectorXd increments_hz,
                FrequencyLimits limits)
      : carrier_hz_(carrier_hz),
        increments_hz_(std::move(increments_hz)),
        carrier_max_hz_(limits.carrier_max_hz),
        increment_max_hz_(limits.increment_max_hz) {
    const double f0 = geom.base_frequency_hz();
    if (increments_hz_.size() != geom.n_antennas()) {
      throw ValidationError("increments_hz length must equal n_antennas");
    }
    if (!(carrier_hz_ >= f0 && carrier_hz_ <= carrier_max_hz_)) {
      throw ValidationError("carrier_hz must lie in [f0, carrier_max_hz]");
    }
    if (increment_max_hz_ < 0.0 || increment_max_hz_ > 1e-3 * carrier_max_hz_) {
      throw ValidationError("increment_max_hz must lie in [0, 1e-3 * carrier_max_hz]");
    }
    for (Eigen::Index n = 0; n < increments_hz_.size(); ++n) {
      if (!(increments_hz_[n] >= 0.0 && increments_hz_[n] <= increment_max_hz_)) {
        throw ValidationError("increments_hz entries must lie in [0, increment_max_hz]");
      }
    }
  }

  /// Plan with zero increments at the base carrier (the FPA operating point).
  static FrequencyPlan fixed_position(const ArrayGeometry& geom, FrequencyLimits limits) {
    return FrequencyPlan(geom, geom.base_frequency_hz(),
                         Eigen::VectorXd::Zero(geom.n_antennas()), limits);
  }

  /// Uniform-increment ladder Delta_f = [df, 2*df, ..., N*df] used throughout
  /// the closed-form null-steering analysis.
  static FrequencyPlan uniform_ladder(const ArrayGeometry& geom, double carrier_hz,
                                      double delta_f_hz, FrequencyLimits limits) {
    Eigen::VectorXd inc(geom.n_antennas());
    for (int n = 1; n <= geom.n_antennas(); ++n) inc[n - 1] = n * delta_f_hz;
    return FrequencyPlan(geom, carrier_hz, std::move(inc), limits);
  }

  double carrier_hz() const { return carrier_hz_; }
  const Eigen::VectorXd& increments_hz() const { return increments_hz_; }
  double carrier_max_hz() const { return carrier_max_hz_; }
  double increment_max_hz() const { return increment_max_hz_; }
  FrequencyLimits limits() const { return {carrier_max_hz_, increment_max_hz_}; }

  /// Attenuation factor gamma_c = f0 / f_c in (0, 1].
  double attenuation_factor(const ArrayGeometry& geom) const {
    return geom.base_frequency_hz() / carrier_hz_;
  }

 private:
  double carrier_hz_;
  Eigen::VectorXd increments_hz_;
  double carrier_max_hz_;
  double increment_max_hz_;
};

}  // namespace fsa
