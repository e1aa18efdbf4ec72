// fsalab — command-line front end for the frequency-switching-array
// physical-layer security toolkit: solvers, sweeps, null-steering closed
// forms, beam-pattern scans and gradient audits.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fsa/fsa.hpp"
#include "fsa/gradient_audit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool quiet = false;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
  auto* config = cmd->add_option("--config", opts.config_path, "JSON experiment config");
  if (config_required) config->required();
  cmd->add_option("--set", opts.overrides,
                  "dotted-path config override key=value (repeatable)");
  cmd->add_option("--seed", opts.seed, "RNG seed override");
  cmd->add_option("--out", opts.out_path, "output file path");
  cmd->add_flag("--quiet", opts.quiet, "suppress informational output");
  cmd->add_flag("-v", opts.verbosity, "increase verbosity");
}

fsa::ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  nlohmann::json j = fsa::load_config_json(opts.config_path);
  for (const std::string& entry : opts.overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw fsa::ValidationError("--set expects key=value, got '" + entry + "'");
    }
    fsa::apply_override(j, entry.substr(0, eq), entry.substr(eq + 1));
  }
  fsa::ExperimentConfig cfg = fsa::parse_config(j);
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

void print_report(const fsa::SecrecyReport& report) {
  std::printf("secrecy_rate_bps_hz  %.9f\n", report.secrecy_rate_bps_hz);
  std::printf("rate_bob_bps_hz      %.9f\n", report.rate_bob_bps_hz);
  std::printf("rate_eves_bps_hz     %.9f\n", report.rate_eves_bps_hz);
  std::printf("unclamped_difference %.9f\n", report.unclamped_difference);
}

int run_solve(const CommonOptions& opts) {
  const fsa::ExperimentConfig cfg = load_with_overrides(opts);
  const fsa::ArrayGeometry geom = cfg.make_geometry();
  const fsa::Scenario scenario = cfg.make_scenario();
  fsa::OptimizerConfig optimizer = cfg.optimizer;
  optimizer.rng_seed = cfg.seed;

  const fsa::FsaSolveResult result = fsa::bcd_solve(geom, scenario, cfg.limits, optimizer);
  if (!opts.quiet) {
    print_report(result.report);
    std::printf("carrier_hz           %.6e\n", result.plan.carrier_hz());
    std::printf("converged            %s\n", result.converged ? "true" : "false");
    std::printf("iterations           %d\n", result.iterations);
  }
  const std::string trace_path = opts.out_path.empty() ? "trace.json" : opts.out_path;
  std::ofstream out(trace_path);
  if (!out) throw std::runtime_error("cannot open output file: " + trace_path);
  out << fsa::solve_result_to_json(result).dump(2) << '\n';
  if (!opts.quiet) std::printf("trace                %s\n", trace_path.c_str());
  return kExitOk;
}

int run_sweep_cmd(const CommonOptions& opts, const std::string& var_override) {
  fsa::ExperimentConfig cfg = load_with_overrides(opts);
  if (!var_override.empty()) {
    cfg.sweep_variable = fsa::sweep_variable_from_name(var_override);
  }
  const std::string out_path = opts.out_path.empty() ? cfg.output_path : opts.out_path;

  const fsa::SweepOutcome outcome = fsa::run_sweep(cfg);
  fsa::write_results_csv(outcome.rows, out_path);
  if (!opts.quiet) {
    std::printf("wrote %zu rows to %s\n", outcome.rows.size(), out_path.c_str());
    if (opts.verbosity > 0) {
      for (const fsa::ResultRow& row : outcome.rows) {
        std::printf("  %s\n", fsa::result_row_csv(row).c_str());
      }
    }
  }
  return kExitOk;
}

int run_nullsteer(double du, double dr, int n, double f0, double fh, double dfmax,
                  double pmax_dbm, double noise_dbm, double bob_range) {
  const fsa::ArrayGeometry geom(n, f0);
  const fsa::GeometryGap gap{du, dr};
  const fsa::FrequencyLimits limits{fh > 0.0 ? fh : 2.0 * f0, dfmax};
  const double p = fsa::dbm_to_watt(pmax_dbm);
  const double s2 = fsa::dbm_to_watt(noise_dbm);
  const double eve_range = bob_range - dr;
  if (eve_range <= 0.0) throw fsa::ValidationError("--dr places Eve at a nonpositive range");
  const fsa::LinkBudget budget{
      p * n * std::norm(fsa::default_path_gain(f0, bob_range)),
      p * n * std::norm(fsa::default_path_gain(f0, eve_range)), s2};

  const fsa::NullSolution sol = fsa::solve_null_steering(geom, gap, limits, budget);
  const char* case_name = nullptr;
  switch (sol.case_id) {
    case fsa::NullCase::SameAngle: case_name = "same-angle"; break;
    case fsa::NullCase::SameRange: case_name = "same-range"; break;
    case fsa::NullCase::GeneralPositive: case_name = "general (du*dr > 0)"; break;
    case fsa::NullCase::GeneralNegative: case_name = "general (du*dr < 0)"; break;
  }
  std::printf("case                 %s\n", case_name);
  std::printf("feasible             %s\n", sol.feasible ? "true" : "false");
  std::printf("delta_f_hz           %.12g\n", sol.delta_f_hz);
  std::printf("carrier_hz           %.12g\n", sol.carrier_hz);
  std::printf("null_index_k         %ld\n", sol.null_index_k);
  if (sol.feasible) {
    std::printf("achieved_rate_bps_hz %.9f\n", sol.achieved_rate_bps_hz);
    std::printf("correlation          %.3e\n",
                fsa::correlation_closed_form(geom, sol.carrier_hz, sol.delta_f_hz, du, dr));
  }
  if (sol.relaxed_delta_f_hz) {
    std::printf("relaxed_delta_f_hz   %.12g\n", *sol.relaxed_delta_f_hz);
    std::printf("relaxed_carrier_hz   %.12g\n", *sol.relaxed_carrier_hz);
  }
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  // "min:max:count" inclusive linear grid
  double lo = 0.0, hi = 0.0;
  int count = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 || hi <= lo) {
    throw fsa::ValidationError("--grid expects min:max:count with count >= 2 and max > min");
  }
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
  return grid;
}

int run_beamscan(const CommonOptions& opts, const std::string& axis_name,
                 const std::string& grid_text, double ladder_df, double carrier) {
  const fsa::ExperimentConfig cfg = load_with_overrides(opts);
  const fsa::ArrayGeometry geom = cfg.make_geometry();
  const fsa::Terminal bob = cfg.bob.make(cfg.base_frequency_hz);

  fsa::ScanAxis axis;
  if (axis_name == "angle") {
    axis = fsa::ScanAxis::Angle;
  } else if (axis_name == "range") {
    axis = fsa::ScanAxis::Range;
  } else {
    throw fsa::ValidationError("--axis must be 'angle' or 'range'");
  }
  const std::vector<double> grid = parse_grid(grid_text);
  const double fc = carrier > 0.0 ? carrier : cfg.base_frequency_hz;
  const Eigen::VectorXd increments = fsa::ladder_increments(geom, ladder_df);
  const Eigen::VectorXcd a_bob = fsa::steering_vector_raw(
      geom, fc, increments, bob.spatial_angle(), bob.range_m(), 0.0);
  const fsa::Beamformer w{std::sqrt(fsa::dbm_to_watt(cfg.transmit_power_dbm)) * a_bob};

  const std::vector<fsa::ScanPoint> points =
      fsa::beam_pattern_scan(geom, fc, increments, w, axis, grid, bob);
  std::ofstream out(opts.out_path.empty() ? "beamscan.csv" : opts.out_path);
  if (!out) throw std::runtime_error("cannot open output file");
  out << "coordinate,normalized_gain\n";
  for (const fsa::ScanPoint& p : points) {
    out << fsa::format_number(p.coordinate) << ',' << fsa::format_number(p.normalized_gain)
        << '\n';
  }
  if (!opts.quiet) std::printf("wrote %zu scan points\n", points.size());
  return kExitOk;
}

int run_converge(const CommonOptions& opts, std::vector<int> antenna_counts) {
  const fsa::ExperimentConfig cfg = load_with_overrides(opts);
  if (antenna_counts.empty()) antenna_counts = {13, 17, 23, 27};
  const std::vector<fsa::ConvergenceRun> runs = fsa::convergence_study(cfg, antenna_counts);

  std::ofstream out(opts.out_path.empty() ? "convergence.csv" : opts.out_path);
  if (!out) throw std::runtime_error("cannot open output file");
  out << "n_antennas,iteration,objective_bps_hz\n";
  for (const fsa::ConvergenceRun& run : runs) {
    for (const fsa::IterationRecord& rec : run.trace.iterations) {
      out << run.n_antennas << ',' << rec.iteration << ','
          << fsa::format_number(rec.objective_bps_hz) << '\n';
    }
    if (!opts.quiet) {
      std::printf("N=%d converged=%s iterations=%d final=%.6f bps/Hz\n", run.n_antennas,
                  run.converged ? "true" : "false", run.iterations,
                  run.trace.final_objective_bps_hz);
    }
  }
  return kExitOk;
}

int run_gradcheck(int trials, std::uint64_t seed) {
  const fsa::GradientAuditReport report = fsa::gradient_audit(trials, seed);
  std::printf("trials                     %d\n", report.trials);
  std::printf("max_rel_error_fiv          %.3e\n", report.max_rel_error_fiv);
  std::printf("max_rel_error_carrier      %.3e\n", report.max_rel_error_carrier);
  const bool ok = report.max_rel_error_fiv < 1e-5 && report.max_rel_error_carrier < 1e-5;
  std::printf("audit                      %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fsalab: frequency-switching-array physical-layer security toolkit"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "run the FSA secrecy-rate maximizer");
  add_common(solve_cmd, solve_opts, true);

  CommonOptions sweep_opts;
  std::string sweep_var;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a config-driven sweep and write CSV");
  add_common(sweep_cmd, sweep_opts, true);
  sweep_cmd->add_option("--var", sweep_var, "sweep variable (power|antennas|offset)");

  auto* null_cmd = app.add_subcommand("nullsteer", "closed-form null-steering solution");
  double du = 0.0, dr = 0.0, ns_f0 = 60e9, ns_fh = 0.0, ns_dfmax = 4e6;
  double ns_pmax = 30.0, ns_noise = -80.0, ns_bob_range = 100.0;
  int ns_n = 13;
  null_cmd->add_option("--du", du, "sine-angle difference sin(theta_B) - sin(theta_E)")
      ->required();
  null_cmd->add_option("--dr", dr, "range difference r_B - r_E [m]")->required();
  null_cmd->add_option("--n", ns_n, "number of antennas (odd)")->required();
  null_cmd->add_option("--f0", ns_f0, "base carrier [Hz]");
  null_cmd->add_option("--fh", ns_fh, "max carrier [Hz] (default 2*f0)");
  null_cmd->add_option("--dfmax", ns_dfmax, "max ladder seed offset [Hz]");
  null_cmd->add_option("--pmax-dbm", ns_pmax, "transmit power [dBm]");
  null_cmd->add_option("--noise-dbm", ns_noise, "noise power [dBm]");
  null_cmd->add_option("--range-bob", ns_bob_range, "Bob range [m]");

  CommonOptions scan_opts;
  std::string scan_axis = "range", scan_grid = "10:100:1001";
  double scan_ladder_df = 0.0, scan_carrier = 0.0;
  auto* scan_cmd = app.add_subcommand("beamscan", "sample the beam pattern along an axis");
  add_common(scan_cmd, scan_opts, true);
  scan_cmd->add_option("--axis", scan_axis, "scan axis: angle | range");
  scan_cmd->add_option("--grid", scan_grid, "scan grid min:max:count");
  scan_cmd->add_option("--ladder-df", scan_ladder_df, "uniform ladder seed [Hz]");
  scan_cmd->add_option("--carrier", scan_carrier, "carrier override [Hz]");

  CommonOptions conv_opts;
  std::vector<int> conv_n;
  auto* conv_cmd = app.add_subcommand("converge", "convergence traces across array sizes");
  add_common(conv_cmd, conv_opts, true);
  conv_cmd->add_option("--n", conv_n, "antenna counts (repeatable)");

  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  int grad_trials = 100;
  std::uint64_t grad_seed = 1;
  grad_cmd->add_option("--trials", grad_trials, "number of random audit points");
  grad_cmd->add_option("--seed", grad_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitValidation;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opts);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_opts, sweep_var);
    if (null_cmd->parsed()) {
      return run_nullsteer(du, dr, ns_n, ns_f0, ns_fh, ns_dfmax, ns_pmax, ns_noise,
                           ns_bob_range);
    }
    if (scan_cmd->parsed()) {
      return run_beamscan(scan_opts, scan_axis, scan_grid, scan_ladder_df, scan_carrier);
    }
    if (conv_cmd->parsed()) return run_converge(conv_opts, conv_n);
    if (grad_cmd->parsed()) return run_gradcheck(grad_trials, grad_seed);
    std::cerr << app.help();
    return kExitValidation;
  } catch (const fsa::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fsa::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fsa::WrongCase& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
