#pragma once

#include <cmath>

namespace fsa {

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace fsa
