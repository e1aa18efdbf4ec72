#pragma once

#include <Eigen/Dense>

#include "fsa/constants.hpp"
#include "fsa/errors.hpp"

namespace fsa {

/// Centered uniform linear array with half-wavelength spacing at the base
/// carrier. Element n (1-based) sits at y_n = delta_n * d0 with
/// delta_n = (2n - N - 1) / 2, so the offsets are symmetric about the origin.
class ArrayGeometry {
 public:
  ArrayGeometry(int n_antennas, double base_frequency_hz)
      : n_antennas_(n_antennas),
        base_frequency_hz_(base_frequency_hz),
        spacing_m_(kSpeedOfLight / (2.0 * base_frequency_hz)) {
    if (n_antennas < 1 || n_antennas % 2 == 0) {
      throw ValidationError("n_antennas must be a positive odd integer");
    }
    if (!(base_frequency_hz > 0.0)) {
      throw ValidationError("base_frequency_hz must be positive");
    }
    index_offsets_.resize(n_antennas);
    for (int n = 1; n <= n_antennas; ++n) {
      index_offsets_[n - 1] = (2.0 * n - n_antennas - 1.0) / 2.0;
    }
  }

  int n_antennas() const { return n_antennas_; }
  double base_frequency_hz() const { return base_frequency_hz_; }
  double spacing_m() const { return spacing_m_; }
  const Eigen::VectorXd& index_offsets() const { return index_offsets_; }

  /// Physical element coordinates delta_n * d0 [m].
  Eigen::VectorXd element_positions_m() const { return index_offsets_ * spacing_m_; }

  /// Aperture N * d0 [m].
  double aperture_m() const { return n_antennas_ * spacing_m_; }

 private:
  int n_antennas_;
  double base_frequency_hz_;
  double spacing_m_;
  Eigen::VectorXd index_offsets_;
};

}  // namespace fsa
