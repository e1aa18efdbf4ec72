#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "fsa/fsa.hpp"
#include "test_support.hpp"

using namespace fsa;
using Catch::Approx;

TEST_CASE("array geometry invariants") {
  ArrayGeometry geom(13, 60e9);
  REQUIRE(geom.index_offsets().sum() == Approx(0.0).margin(1e-12));
  REQUIRE(geom.index_offsets()[0] == Approx(-6.0));
  REQUIRE(geom.index_offsets()[12] == Approx(6.0));
  REQUIRE(geom.spacing_m() ==
          Approx(kSpeedOfLight / (2.0 * 60e9)).epsilon(1e-12));

  REQUIRE_THROWS_AS(ArrayGeometry(12, 60e9), ValidationError);
  REQUIRE_THROWS_AS(ArrayGeometry(-3, 60e9), ValidationError);
  REQUIRE_THROWS_AS(ArrayGeometry(13, 0.0), ValidationError);
}

TEST_CASE("frequency plan validation") {
  ArrayGeometry geom(13, 60e9);
  FrequencyLimits limits{120e9, 4e6};
  REQUIRE_NOTHROW(FrequencyPlan::fixed_position(geom, limits));
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 59e9, Eigen::VectorXd::Zero(13), limits),
                    ValidationError);
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 121e9, Eigen::VectorXd::Zero(13), limits),
                    ValidationError);
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 60e9, Eigen::VectorXd::Constant(13, 5e6), limits),
                    ValidationError);
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 60e9, Eigen::VectorXd::Constant(13, -1.0), limits),
                    ValidationError);
  // increments must stay small against the carrier ceiling
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 60e9, Eigen::VectorXd::Zero(13),
                                  FrequencyLimits{120e9, 1e9}),
                    ValidationError);
  REQUIRE_THROWS_AS(FrequencyPlan(geom, 60e9, Eigen::VectorXd::Zero(12), limits),
                    ValidationError);
}

TEST_CASE("steering vector closed cases") {
  ArrayGeometry geom(13, 30e9);
  FrequencyLimits limits{60e9, 4e6};
  FrequencyPlan plan = FrequencyPlan::fixed_position(geom, limits);

  SECTION("broadside with zero increments is uniform") {
    Terminal site(0.0, 50.0, default_path_gain(30e9, 50.0));
    const Eigen::VectorXcd a = steering_vector(geom, plan, site, 0.0);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].real() == Approx(1.0 / std::sqrt(13.0)).epsilon(1e-14));
      REQUIRE(a[i].imag() == Approx(0.0).margin(1e-14));
    }
  }

  SECTION("u = 1/2 at the base carrier gives phases pi delta_n / 2") {
    Terminal site(0.5, 50.0, default_path_gain(30e9, 50.0));
    const Eigen::VectorXcd a = steering_vector(geom, plan, site, 0.0);
    for (int n = 1; n <= 13; ++n) {
      const double delta = (2.0 * n - 14.0) / 2.0;
      const std::complex<double> expected =
          std::polar(1.0 / std::sqrt(13.0), kPi * delta / 2.0);
      REQUIRE(std::abs(a[n - 1] - expected) < 1e-12);
    }
  }
}

TEST_CASE("steering vector matches the entrywise oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(2 * rng.uniform_int(1, 10) + 1);
    const double f0 = rng.uniform() < 0.5 ? 30e9 : 60e9;
    ArrayGeometry geom(n, f0);
    FrequencyLimits limits{2.0 * f0, 4e6};
    Eigen::VectorXd inc(n);
    for (int i = 0; i < n; ++i) inc[i] = rng.uniform(0.0, 4e6);
    const double fc = rng.uniform(f0, 2.0 * f0);
    FrequencyPlan plan(geom, fc, inc, limits);
    const double u = rng.uniform(-1.0, 1.0);
    const double r = rng.uniform(5.0, 300.0);
    const double t = rng.uniform(0.0, 1e-3);
    Terminal site(u, r, default_path_gain(f0, r));

    const Eigen::VectorXcd a = steering_vector(geom, plan, site, t);
    REQUIRE(a.norm() == Approx(1.0).epsilon(1e-12));
    for (int i = 1; i <= n; ++i) {
      const std::complex<double> expected =
          test::steering_entry_oracle(n, i, f0, fc, inc[i - 1], u, r, t);
      REQUIRE(std::abs(a[i - 1]) == Approx(1.0 / std::sqrt(double(n))).epsilon(1e-12));
      REQUIRE(std::abs(a[i - 1] - expected) < 1e-9);
    }
  }
}

TEST_CASE("channel vectors") {
  const double f0 = 60e9;
  ArrayGeometry geom(13, f0);
  FrequencyLimits limits{120e9, 4e6};
  Terminal bob(0.0, 40.0, default_path_gain(f0, 40.0));

  SECTION("base carrier has unit attenuation and full norm") {
    FrequencyPlan plan = FrequencyPlan::fixed_position(geom, limits);
    const ChannelVector h = channel_bob(geom, plan, bob);
    REQUIRE(h.attenuation_factor == Approx(1.0));
    REQUIRE(h.norm() ==
            Approx(std::sqrt(13.0) * std::abs(bob.path_gain_f0())).epsilon(1e-12));
  }

  SECTION("doubling the carrier halves the norm") {
    FrequencyPlan base = FrequencyPlan::fixed_position(geom, limits);
    FrequencyPlan doubled(geom, 2.0 * f0, Eigen::VectorXd::Zero(13), limits);
    const double n0 = channel_bob(geom, base, bob).norm();
    const double n2 = channel_bob(geom, doubled, bob).norm();
    REQUIRE(n2 == Approx(n0 / 2.0).epsilon(1e-12));
  }

  SECTION("squared norm matches the scalar oracle on the reference setup") {
    FrequencyPlan plan(geom, 90e9, Eigen::VectorXd::Constant(13, 2e6), limits);
    const ChannelVector h = channel_bob(geom, plan, bob);
    const double gamma = f0 / 90e9;
    const double expected = 13.0 * gamma * gamma * std::norm(bob.path_gain_f0());
    REQUIRE(h.entries.squaredNorm() == Approx(expected).epsilon(1e-12));
  }

  SECTION("carrier scaling law over the band") {
    FrequencyPlan base = FrequencyPlan::fixed_position(geom, limits);
    const double n0 = channel_bob(geom, base, bob).norm();
    for (double kappa : {1.0, 1.25, 1.5, 2.0}) {
      FrequencyPlan plan(geom, kappa * f0, Eigen::VectorXd::Zero(13), limits);
      REQUIRE(channel_bob(geom, plan, bob).norm() == Approx(n0 / kappa).epsilon(1e-12));
    }
  }
}

TEST_CASE("default path gain") {
  REQUIRE(std::abs(default_path_gain(60e9, 80.0)) ==
          Approx(std::abs(default_path_gain(60e9, 40.0)) / 2.0).epsilon(1e-12));
  REQUIRE(std::abs(default_path_gain(120e9, 40.0)) ==
          Approx(std::abs(default_path_gain(60e9, 40.0)) / 2.0).epsilon(1e-12));
  // frozen from independent scalar arithmetic: c / (4 pi * 60 GHz * 40 m)
  REQUIRE(std::abs(default_path_gain(60e9, 40.0)) ==
          Approx(9.94718394324346e-06).epsilon(1e-12));
  REQUIRE(default_path_gain(60e9, 40.0).imag() == 0.0);
  REQUIRE_THROWS_AS(default_path_gain(60e9, 0.0), ValidationError);
}

TEST_CASE("equivalent positions") {
  const double f0 = 30e9;
  ArrayGeometry geom(9, f0);
  FrequencyLimits limits{90e9, 4e6};
  Terminal site(0.31, 60.0, default_path_gain(f0, 60.0));

  SECTION("zero increments scale uniformly into the sparse array") {
    FrequencyPlan plan(geom, 2.5 * f0, Eigen::VectorXd::Zero(9), limits);
    const Eigen::VectorXd virtual_pos = equivalent_positions(geom, plan, site);
    const Eigen::VectorXd expected = 2.5 * geom.element_positions_m();
    REQUIRE((virtual_pos - expected).lpNorm<Eigen::Infinity>() < 1e-15);
  }

  SECTION("identity at the base carrier with zero increments") {
    FrequencyPlan plan = FrequencyPlan::fixed_position(geom, limits);
    const Eigen::VectorXd virtual_pos = equivalent_positions(geom, plan, site);
    REQUIRE((virtual_pos - geom.element_positions_m()).lpNorm<Eigen::Infinity>() < 1e-15);
  }

  SECTION("broadside is degenerate") {
    FrequencyPlan plan = FrequencyPlan::fixed_position(geom, limits);
    Terminal broadside(0.0, 60.0, default_path_gain(f0, 60.0));
    REQUIRE_THROWS_AS(equivalent_positions(geom, plan, broadside), DegenerateAngle);
  }

  SECTION("virtual array reproduces the steering phases") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      Eigen::VectorXd inc(9);
      for (int i = 0; i < 9; ++i) inc[i] = rng.uniform(0.0, 4e6);
      const double fc = rng.uniform(f0, 3.0 * f0);
      FrequencyPlan plan(geom, fc, inc, limits);
      double u = rng.uniform(0.05, 0.9) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const double r = rng.uniform(10.0, 200.0);
      Terminal terminal(u, r, default_path_gain(f0, r));

      const Eigen::VectorXd virtual_pos = equivalent_positions(geom, plan, terminal, 0.0);
      const Eigen::VectorXcd actual = steering_vector(geom, plan, terminal, 0.0);
      for (int i = 0; i < 9; ++i) {
        const std::complex<double> expected = std::polar(
            1.0 / 3.0, kTwoPi * f0 * virtual_pos[i] * u / kSpeedOfLight);
        // compare as complex values: equality modulo 2 pi comes for free
        REQUIRE(std::abs(actual[i] - expected) < 1e-9 / 3.0);
      }
    }
  }
}

TEST_CASE("time compensation leaves the matched gain invariant") {
  const double f0 = 60e9;
  ArrayGeometry geom(13, f0);
  FrequencyLimits limits{120e9, 4e6};
  Rng rng(31);
  Eigen::VectorXd inc(13);
  for (int i = 0; i < 13; ++i) inc[i] = rng.uniform(0.0, 4e6);
  FrequencyPlan plan(geom, 80e9, inc, limits);
  Terminal bob(0.2, 40.0, default_path_gain(f0, 40.0));

  double reference = -1.0;
  for (double t : {0.0, 1e-6, 3.7e-4, 0.01, 1.0}) {
    const ChannelVector h = channel_bob(geom, plan, bob, t);
    const Beamformer w = mrt_beamformer(geom, plan, bob, 2.0, t);
    const double gain = std::abs(h.entries.dot(w.weights));
    if (reference < 0.0) {
      reference = gain;
    } else {
      REQUIRE(gain == Approx(reference).epsilon(1e-10));
    }
  }
}
