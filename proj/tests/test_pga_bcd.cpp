#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fsa/fsa.hpp"
#include "test_support.hpp"

using namespace fsa;
using Catch::Approx;

TEST_CASE("projections") {
  SECTION("increment box clamp") {
    Eigen::VectorXd v(3);
    v << -1.0, 2e6, 5e6;
    const Eigen::VectorXd p = project_fiv(v, 4e6);
    REQUIRE(p[0] == 0.0);
    REQUIRE(p[1] == 2e6);
    REQUIRE(p[2] == 4e6);
  }

  SECTION("carrier clamp") {
    REQUIRE(project_carrier(59e9, 60e9, 120e9) == 60e9);
    REQUIRE(project_carrier(80e9, 60e9, 120e9) == 80e9);
    REQUIRE(project_carrier(130e9, 60e9, 120e9) == 120e9);
  }

  SECTION("idempotent and non-expansive") {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd a(5), b(5);
      for (int i = 0; i < 5; ++i) {
        a[i] = rng.uniform(-1e7, 1e7);
        b[i] = rng.uniform(-1e7, 1e7);
      }
      const Eigen::VectorXd pa = project_fiv(a, 4e6);
      const Eigen::VectorXd pb = project_fiv(b, 4e6);
      REQUIRE((project_fiv(pa, 4e6) - pa).lpNorm<Eigen::Infinity>() == 0.0);
      REQUIRE((pa - pb).norm() <= (a - b).norm() + 1e-15);

      const double ca = rng.uniform(0.0, 3e11);
      const double cb = rng.uniform(0.0, 3e11);
      REQUIRE(project_carrier(project_carrier(ca, 60e9, 120e9), 60e9, 120e9) ==
              project_carrier(ca, 60e9, 120e9));
      REQUIRE(std::abs(project_carrier(ca, 60e9, 120e9) - project_carrier(cb, 60e9, 120e9)) <=
              std::abs(ca - cb) + 1e-15);
    }
  }
}

TEST_CASE("pga block") {
  PgaConfig config;
  config.tol = 1e-12;

  SECTION("zero gradient returns the start unchanged") {
    Eigen::VectorXd start(2);
    start << 0.25, 0.5;
    const PgaResult res = pga_block(
        [](const Eigen::VectorXd&) { return 1.0; },
        [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); },
        [](const Eigen::VectorXd& x) { return x; }, start, config);
    REQUIRE(res.status == PgaStatus::Converged);
    REQUIRE(res.accepted_steps == 0);
    REQUIRE((res.point - start).lpNorm<Eigen::Infinity>() == 0.0);
  }

  SECTION("concave quadratic converges to its analytic argmax") {
    // f(x) = -(x - 0.3)^2, argmax at 0.3
    const auto f = [](const Eigen::VectorXd& x) { return -(x[0] - 0.3) * (x[0] - 0.3); };
    const auto g = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, -2.0 * (x[0] - 0.3)).eval();
    };
    const auto proj = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, std::clamp(x[0], 0.0, 1.0)).eval();
    };
    PgaConfig c;
    c.max_iters = 200;
    c.tol = 1e-14;
    const PgaResult res = pga_block(f, g, proj, Eigen::VectorXd::Zero(1), c);
    REQUIRE(res.point[0] == Approx(0.3).margin(1e-6));
    REQUIRE(res.objective == Approx(0.0).margin(1e-12));
  }

  SECTION("argmax outside the box lands on the boundary") {
    const auto f = [](const Eigen::VectorXd& x) { return -(x[0] - 1.7) * (x[0] - 1.7); };
    const auto g = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, -2.0 * (x[0] - 1.7)).eval();
    };
    const auto proj = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, std::clamp(x[0], 0.0, 1.0)).eval();
    };
    const PgaResult res = pga_block(f, g, proj, Eigen::VectorXd::Zero(1), config);
    REQUIRE(res.point[0] == Approx(1.0).margin(1e-9));
  }

  SECTION("monotone objective on a random smooth landscape") {
    Rng rng(71);
    Eigen::VectorXd center(4);
    for (int i = 0; i < 4; ++i) center[i] = rng.uniform(-2.0, 2.0);
    const auto f = [&](const Eigen::VectorXd& x) { return -(x - center).squaredNorm(); };
    const auto g = [&](const Eigen::VectorXd& x) {
      return (-2.0 * (x - center)).eval();
    };
    const auto proj = [](const Eigen::VectorXd& x) {
      return x.cwiseMax(-1.0).cwiseMin(1.0).eval();
    };
    Eigen::VectorXd start(4);
    for (int i = 0; i < 4; ++i) start[i] = rng.uniform(-1.0, 1.0);
    const PgaResult res = pga_block(f, g, proj, start, config);
    REQUIRE(res.objective >= f(start));
    REQUIRE(res.objective == Approx(f(res.point)).margin(1e-12));
  }
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig config;
  REQUIRE_NOTHROW(config.validate());
  OptimizerConfig bad = config;
  bad.armijo_shrink = 1.0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = config;
  bad.multistart_count = 0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = config;
  bad.objective_tol_bps_hz = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
}

namespace {

Scenario reference_scenario() {
  const double f0 = 60e9;
  return Scenario(Terminal::from_degrees(0.0, 40.0, f0),
                  {Terminal::from_degrees(1.71, 45.0, f0),
                   Terminal::from_degrees(1.43, 40.0, f0)},
                  dbm_to_watt(-80.0), dbm_to_watt(30.0));
}

}  // namespace

TEST_CASE("bcd solver") {
  const double f0 = 60e9;
  ArrayGeometry geom(13, f0);
  const FrequencyLimits limits{120e9, 4e6};

  SECTION("with silent eavesdroppers it stays at the fixed-position point") {
    Terminal bob = Terminal::from_degrees(0.0, 40.0, f0);
    Terminal mute(0.2, 50.0, {0.0, 0.0});
    Scenario scenario(bob, {mute}, 1e-11, 1.0);
    OptimizerConfig config;
    config.multistart_count = 1;
    const FsaSolveResult r = bcd_solve(geom, scenario, limits, config);
    REQUIRE(r.converged);
    REQUIRE(r.iterations <= 2);
    REQUIRE(r.plan.carrier_hz() == f0);
    REQUIRE(r.plan.increments_hz().lpNorm<Eigen::Infinity>() == 0.0);
    REQUIRE(r.report.unclamped_difference ==
            Approx(secrecy_upper_bound(geom, scenario)).epsilon(1e-9));
  }

  SECTION("case-1 geometry reaches the analytic optimum") {
    Rng rng(83);
    for (int trial = 0; trial < 8; ++trial) {
      const double u = rng.uniform(-0.5, 0.5);
      const double r_b = rng.uniform(30.0, 100.0);
      const double dr = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(10.0, 25.0);
      Terminal bob(u, r_b, default_path_gain(f0, r_b));
      Terminal eve(u, r_b - dr, default_path_gain(f0, r_b - dr));
      Scenario scenario(bob, {eve}, 1e-11, 1.0);
      const FrequencyLimits ample{2.0 * f0, 2.0 * kSpeedOfLight / std::abs(dr)};
      OptimizerConfig config;
      config.rng_seed = 500 + trial;
      const FsaSolveResult r = bcd_solve(geom, scenario, ample, config);
      REQUIRE(secrecy_upper_bound(geom, scenario) - r.report.unclamped_difference < 1e-3);
    }
  }

  SECTION("reference scenario: monotone, bounded, convergent, deterministic") {
    Scenario scenario = reference_scenario();
    OptimizerConfig config;
    const FsaSolveResult r = bcd_solve(geom, scenario, limits, config);
    REQUIRE(r.converged);
    REQUIRE(r.iterations <= 200);

    const double bound = secrecy_upper_bound(geom, scenario);
    double previous = -1e300;
    for (const IterationRecord& rec : r.trace.iterations) {
      REQUIRE(rec.objective_bps_hz >= previous - 1e-9);
      REQUIRE(rec.objective_bps_hz <= bound + 1e-9);
      previous = rec.objective_bps_hz;
    }

    const FsaSolveResult again = bcd_solve(geom, scenario, limits, config);
    REQUIRE(again.report.secrecy_rate_bps_hz == r.report.secrecy_rate_bps_hz);
    REQUIRE(again.plan.carrier_hz() == r.plan.carrier_hz());
    REQUIRE((again.plan.increments_hz() - r.plan.increments_hz())
                .lpNorm<Eigen::Infinity>() == 0.0);
    REQUIRE((again.beamformer.weights - r.beamformer.weights).norm() == 0.0);
    REQUIRE(again.trace.iterations.size() == r.trace.iterations.size());

    OptimizerConfig other_seed = config;
    other_seed.rng_seed = 999;
    const FsaSolveResult different = bcd_solve(geom, scenario, limits, other_seed);
    REQUIRE(different.report.secrecy_rate_bps_hz ==
            Approx(r.report.secrecy_rate_bps_hz).margin(2e-3));
  }

  SECTION("the upper bound holds across random scenarios") {
    Rng rng(91);
    for (int trial = 0; trial < 6; ++trial) {
      const double r_b = rng.uniform(20.0, 80.0);
      Terminal bob(rng.uniform(-0.6, 0.6), r_b, default_path_gain(f0, r_b));
      std::vector<Terminal> eves;
      const int m = static_cast<int>(rng.uniform_int(1, 3));
      for (int i = 0; i < m; ++i) {
        const double r_e = rng.uniform(20.0, 80.0);
        eves.emplace_back(rng.uniform(-0.6, 0.6), r_e, default_path_gain(f0, r_e));
      }
      Scenario scenario(bob, eves, 1e-11, rng.uniform(0.01, 1.0));
      OptimizerConfig config;
      config.multistart_count = 2;
      config.rng_seed = trial;
      const FsaSolveResult r = bcd_solve(geom, scenario, limits, config);
      const double bound = secrecy_upper_bound(geom, scenario);
      for (const IterationRecord& rec : r.trace.iterations) {
        REQUIRE(rec.objective_bps_hz <= bound + 1e-9);
      }
    }
  }
}
