#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fsa/constants.hpp"
#include "fsa/errors.hpp"

namespace fsa {

/// Free-space amplitude c / (4 pi f0 r) at the base carrier, zero phase.
/// The propagation phase exp(j 2 pi f_c r / c) is applied by the channel ops.
inline std::complex<double> default_path_gain(double f0_hz, double range_m) {
  if (!(range_m > 0.0)) throw ValidationError("range_m must be positive");
  return {kSpeedOfLight / (4.0 * kPi * f0_hz * range_m), 0.0};
}

/// A single-antenna user site. Angles are carried in the sine domain
/// (u = sin(theta)), the coordinate in which all array phases are linear.
class Terminal {
 public:
  Terminal(double spatial_angle, double range_m, std::complex<double> path_gain_f0)
      : spatial_angle_(spatial_angle), range_m_(range_m), path_gain_f0_(path_gain_f0) {
    if (!(range_m_ > 0.0)) throw ValidationError("Terminal range_m must be positive");
    if (!(std::abs(spatial_angle_) <= 1.0)) {
      throw ValidationError("Terminal spatial_angle must lie in [-1, 1]");
    }
  }

  /// Builds a terminal from an angle in degrees with a free-space gain at f0.
  static Terminal from_degrees(double angle_deg, double range_m, double f0_hz) {
    return Terminal(std::sin(angle_deg * kPi / 180.0), range_m,
                    default_path_gain(f0_hz, range_m));
  }

  double spatial_angle() const { return spatial_angle_; }
  double range_m() const { return range_m_; }
  std::complex<double> path_gain_f0() const { return path_gain_f0_; }

  Terminal with_gain(std::complex<double> gain) const {
    return Terminal(spatial_angle_, range_m_, gain);
  }

 private:
  double spatial_angle_;
  double range_m_;
  std::complex<double> path_gain_f0_;
};

/// Bob, the cooperating eavesdroppers, and the link budget.
class Scenario {
 public:
  Scenario(Terminal bob, std::vector<Terminal> eves, double noise_power_w, double power_budget_w)
      : bob_(bob), eves_(std::move(eves)), noise_power_w_(noise_power_w),
        power_budget_w_(power_budget_w) {
    if (eves_.empty()) throw ValidationError("Scenario requires at least one eavesdropper");
    if (!(noise_power_w_ > 0.0)) throw ValidationError("noise_power_w must be positive");
    if (!(power_budget_w_ > 0.0)) throw ValidationError("power_budget_w must be positive");
  }

  const Terminal& bob() const { return bob_; }
  const std::vector<Terminal>& eves() const { return eves_; }
  int n_eves() const { return static_cast<int>(eves_.size()); }
  double noise_power_w() const { return noise_power_w_; }
  double power_budget_w() const { return power_budget_w_; }

 private:
  Terminal bob_;
  std::vector<Terminal> eves_;
  double noise_power_w_;
  double power_budget_w_;
};

}  // namespace fsa
