#pragma once

#include <atomic>
#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsa/baselines.hpp"
#include "fsa/bcd.hpp"
#include "fsa/constants.hpp"
#include "fsa/errors.hpp"
#include "fsa/metrics.hpp"

namespace fsa {

enum class Scheme { FSA = 0, MA = 1, FDA = 2, FPA = 3 };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::FSA: return "FSA";
    case Scheme::MA: return "MA";
    case Scheme::FDA: return "FDA";
    case Scheme::FPA: return "FPA";
  }
  return "?";
}

inline Scheme scheme_from_name(const std::string& name) {
  if (name == "FSA") return Scheme::FSA;
  if (name == "MA") return Scheme::MA;
  if (name == "FDA") return Scheme::FDA;
  if (name == "FPA") return Scheme::FPA;
  throw ValidationError("schemes: unknown scheme '" + name + "'");
}

enum class SweepVariable { TransmitPowerDbm, NAntennas, MaxOffsetHz };

inline const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::TransmitPowerDbm: return "transmit_power_dbm";
    case SweepVariable::NAntennas: return "n_antennas";
    case SweepVariable::MaxOffsetHz: return "max_offset_hz";
  }
  return "?";
}

inline SweepVariable sweep_variable_from_name(const std::string& name) {
  if (name == "transmit_power_dbm" || name == "power") return SweepVariable::TransmitPowerDbm;
  if (name == "n_antennas" || name == "antennas") return SweepVariable::NAntennas;
  if (name == "max_offset_hz" || name == "offset") return SweepVariable::MaxOffsetHz;
  throw ValidationError("sweep.variable: unknown variable '" + name + "'");
}

/// A terminal as written in config files: degrees and meters, with either an
/// explicit complex gain or the free-space default.
struct TerminalSpec {
  double angle_deg = 0.0;
  double range_m = 0.0;
  std::optional<std::complex<double>> gain;  // nullopt -> free-space at f0

  Terminal make(double f0_hz) const {
    Terminal t = Terminal::from_degrees(angle_deg, range_m, f0_hz);
    if (gain) t = t.with_gain(*gain);
    return t;
  }
};

struct ExperimentConfig {
  int schema_version = 1;
  int n_antennas = 13;
  double base_frequency_hz = 60e9;
  FrequencyLimits limits{120e9, 4e6};
  TerminalSpec bob;
  std::vector<TerminalSpec> eves;
  double transmit_power_dbm = 30.0;
  double noise_power_dbm = -80.0;
  OptimizerConfig optimizer;
  SweepVariable sweep_variable = SweepVariable::TransmitPowerDbm;
  std::vector<double> sweep_grid;
  std::vector<Scheme> schemes{Scheme::FSA, Scheme::MA, Scheme::FDA, Scheme::FPA};
  std::string output_path = "results.csv";
  std::uint64_t seed = 1;

  ArrayGeometry make_geometry(std::optional<int> n_override = {}) const {
    return ArrayGeometry(n_override.value_or(n_antennas), base_frequency_hz);
  }

  Scenario make_scenario(std::optional<double> power_dbm_override = {}) const {
    std::vector<Terminal> eve_terminals;
    eve_terminals.reserve(eves.size());
    for (const TerminalSpec& spec : eves) eve_terminals.push_back(spec.make(base_frequency_hz));
    return Scenario(bob.make(base_frequency_hz), std::move(eve_terminals),
                    dbm_to_watt(noise_power_dbm),
                    dbm_to_watt(power_dbm_override.value_or(transmit_power_dbm)));
  }

  FrequencyLimits make_limits(std::optional<double> df_max_override = {}) const {
    return FrequencyLimits{limits.carrier_max_hz, df_max_override.value_or(limits.increment_max_hz)};
  }
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const std::string& key,
                                           const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing required field '" + context + key + "'");
  return *it;
}

inline double number_field(const nlohmann::json& j, const std::string& key,
                           const std::string& context) {
  const nlohmann::json& v = require_field(j, key, context);
  if (!v.is_number()) throw ValidationError("field '" + context + key + "' must be a number");
  return v.get<double>();
}

inline TerminalSpec parse_terminal(const nlohmann::json& j, const std::string& context) {
  TerminalSpec spec;
  spec.angle_deg = number_field(j, "angle_deg", context);
  spec.range_m = number_field(j, "range_m", context);
  if (!(spec.range_m > 0.0)) throw ValidationError("field '" + context + "range_m' must be > 0");
  if (std::abs(spec.angle_deg) > 90.0) {
    throw ValidationError("field '" + context + "angle_deg' must lie in [-90, 90]");
  }
  if (j.contains("gain")) {
    const nlohmann::json& g = j.at("gain");
    if (g.is_string()) {
      if (g.get<std::string>() != "free-space") {
        throw ValidationError("field '" + context + "gain' must be \"free-space\" or [re, im]");
      }
    } else if (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number()) {
      spec.gain = std::complex<double>(g[0].get<double>(), g[1].get<double>());
    } else {
      throw ValidationError("field '" + context + "gain' must be \"free-space\" or [re, im]");
    }
  }
  return spec;
}

}  // namespace detail

/// Builds a validated config from parsed JSON. Degrees in the file become
/// sine-domain angles when terminals are instantiated.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");
  const int version = static_cast<int>(detail::number_field(j, "schema_version", ""));
  if (version != 1) throw ValidationError("schema_version: only version 1 is supported");
  cfg.schema_version = version;

  const nlohmann::json& geometry = detail::require_field(j, "geometry", "");
  const double n = detail::number_field(geometry, "n_antennas", "geometry.");
  if (n != std::floor(n) || n < 1 || static_cast<long long>(n) % 2 == 0) {
    throw ValidationError("geometry.n_antennas must be a positive odd integer");
  }
  cfg.n_antennas = static_cast<int>(n);
  cfg.base_frequency_hz = detail::number_field(geometry, "base_frequency_hz", "geometry.");
  if (!(cfg.base_frequency_hz > 0.0)) {
    throw ValidationError("geometry.base_frequency_hz must be positive");
  }

  const nlohmann::json& limits = detail::require_field(j, "limits", "");
  cfg.limits.carrier_max_hz = detail::number_field(limits, "carrier_max_hz", "limits.");
  cfg.limits.increment_max_hz = detail::number_field(limits, "increment_max_hz", "limits.");
  if (cfg.limits.carrier_max_hz < cfg.base_frequency_hz) {
    throw ValidationError("limits.carrier_max_hz must be at least the base frequency");
  }
  if (cfg.limits.increment_max_hz < 0.0 ||
      cfg.limits.increment_max_hz > 1e-3 * cfg.limits.carrier_max_hz) {
    throw ValidationError("limits.increment_max_hz must lie in [0, 1e-3 * carrier_max_hz]");
  }

  const nlohmann::json& scenario = detail::require_field(j, "scenario", "");
  cfg.bob = detail::parse_terminal(detail::require_field(scenario, "bob", "scenario."),
                                   "scenario.bob.");
  const nlohmann::json& eves = detail::require_field(scenario, "eves", "scenario.");
  if (!eves.is_array() || eves.empty()) {
    throw ValidationError("scenario.eves must be a non-empty array");
  }
  for (std::size_t m = 0; m < eves.size(); ++m) {
    cfg.eves.push_back(detail::parse_terminal(
        eves[m], "scenario.eves[" + std::to_string(m) + "]."));
  }
  cfg.transmit_power_dbm = detail::number_field(scenario, "transmit_power_dbm", "scenario.");
  cfg.noise_power_dbm = detail::number_field(scenario, "noise_power_dbm", "scenario.");

  if (j.contains("optimizer")) {
    const nlohmann::json& opt = j.at("optimizer");
    auto maybe = [&](const char* key, auto& slot) {
      if (opt.contains(key)) slot = opt.at(key).get<std::decay_t<decltype(slot)>>();
    };
    maybe("max_bcd_iters", cfg.optimizer.max_bcd_iters);
    maybe("pga_max_iters", cfg.optimizer.pga_max_iters);
    maybe("initial_step", cfg.optimizer.initial_step);
    maybe("armijo_shrink", cfg.optimizer.armijo_shrink);
    maybe("armijo_slope", cfg.optimizer.armijo_slope);
    maybe("min_step", cfg.optimizer.min_step);
    maybe("objective_tol_bps_hz", cfg.optimizer.objective_tol_bps_hz);
    maybe("multistart_count", cfg.optimizer.multistart_count);
    try {
      cfg.optimizer.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("optimizer: ") + e.what());
    }
  }

  const nlohmann::json& sweep = detail::require_field(j, "sweep", "");
  cfg.sweep_variable = sweep_variable_from_name(
      detail::require_field(sweep, "variable", "sweep.").get<std::string>());
  const nlohmann::json& grid = detail::require_field(sweep, "grid", "sweep.");
  if (!grid.is_array() || grid.empty()) {
    throw ValidationError("sweep.grid must be a non-empty array");
  }
  for (const auto& v : grid) {
    if (!v.is_number()) throw ValidationError("sweep.grid entries must be numbers");
    cfg.sweep_grid.push_back(v.get<double>());
  }
  for (std::size_t i = 1; i < cfg.sweep_grid.size(); ++i) {
    if (!(cfg.sweep_grid[i] > cfg.sweep_grid[i - 1])) {
      throw ValidationError("sweep.grid must be strictly increasing");
    }
  }
  if (cfg.sweep_variable == SweepVariable::NAntennas) {
    for (const double v : cfg.sweep_grid) {
      if (v != std::floor(v) || v < 1 || static_cast<long long>(v) % 2 == 0) {
        throw ValidationError("sweep.grid for n_antennas must hold positive odd integers");
      }
    }
  }

  if (j.contains("schemes")) {
    if (!j.at("schemes").is_array() || j.at("schemes").empty()) {
      throw ValidationError("schemes must be a non-empty array of scheme names");
    }
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) {
      if (!s.is_string()) throw ValidationError("schemes entries must be strings");
      cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
    }
  }
  if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
  if (j.contains("seed")) {
    const double s = detail::number_field(j, "seed", "");
    if (s < 0 || s != std::floor(s)) throw ValidationError("seed must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  // Instantiating once surfaces any remaining invariant breach (e.g. angles).
  cfg.make_geometry();
  cfg.make_scenario();
  return cfg;
}

inline nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config parse failure in " + path + ": " + e.what());
  }
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  return parse_config(load_config_json(path));
}

/// Applies a dotted-path override such as "limits.increment_max_hz=4e6".
/// Values parse as JSON when possible and fall back to strings. The leading
/// path segment must name a schema section so typos fail loudly.
inline void apply_override(nlohmann::json& j, const std::string& dotted_key,
                           const std::string& value) {
  static const char* kTopLevel[] = {"schema_version", "geometry", "limits", "scenario",
                                    "optimizer",      "sweep",    "schemes", "output_path",
                                    "seed"};
  const std::string head = dotted_key.substr(0, dotted_key.find('.'));
  bool known = false;
  for (const char* key : kTopLevel) known = known || head == key;
  if (!known) {
    throw ValidationError("override key '" + dotted_key +
                          "' does not start with a schema section");
  }

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const nlohmann::json::exception&) {
    parsed = value;
  }
  nlohmann::json* node = &j;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', begin);
    const std::string part = dotted_key.substr(begin, dot - begin);
    if (part.empty()) throw ValidationError("override key has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    begin = dot + 1;
  }
}

struct ResultRow {
  double sweep_value = 0.0;
  Scheme scheme = Scheme::FSA;
  std::optional<double> secrecy_bps_hz;
  std::optional<double> rate_bob_bps_hz;
  std::optional<double> rate_eves_bps_hz;
  bool converged = false;
  int iterations = 0;
  double wall_ms = 0.0;
};

/// Solver state backing a row, kept so rates can be re-derived exactly.
struct RowDetail {
  Scheme scheme = Scheme::FSA;
  std::optional<FrequencyPlan> plan;         // FSA / FDA / FPA
  std::optional<Eigen::VectorXd> positions;  // MA
  Beamformer beamformer;
  int n_antennas = 0;
  double power_dbm = 0.0;
};

struct SweepOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::optional<RowDetail>> details;  // nullopt for failed rows
};

inline int worker_count() {
  if (const char* env = std::getenv("FSA_LAB_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

struct RowTask {
  double sweep_value;
  Scheme scheme;
};

inline std::pair<ResultRow, std::optional<RowDetail>> run_row(const ExperimentConfig& cfg,
                                                              const RowTask& task) {
  ResultRow row;
  row.sweep_value = task.sweep_value;
  row.scheme = task.scheme;

  std::optional<int> n_override;
  std::optional<double> power_override;
  std::optional<double> offset_override;
  switch (cfg.sweep_variable) {
    case SweepVariable::TransmitPowerDbm: power_override = task.sweep_value; break;
    case SweepVariable::NAntennas: n_override = static_cast<int>(task.sweep_value); break;
    case SweepVariable::MaxOffsetHz: offset_override = task.sweep_value; break;
  }

  const auto start_time = std::chrono::steady_clock::now();
  std::optional<RowDetail> row_detail;
  try {
    const ArrayGeometry geom = cfg.make_geometry(n_override);
    const Scenario scenario = cfg.make_scenario(power_override);
    const FrequencyLimits limits = cfg.make_limits(offset_override);
    OptimizerConfig optimizer = cfg.optimizer;
    // Seeds are grid-independent so that schemes untouched by the sweep
    // variable produce identical rows, and FSA/FDA share one stream so their
    // multistarts draw the same increments.
    const std::uint64_t stream =
        (task.scheme == Scheme::FSA || task.scheme == Scheme::FDA) ? 1 : 2;
    optimizer.rng_seed = mix_seed(cfg.seed, stream);

    RowDetail d;
    d.scheme = task.scheme;
    d.n_antennas = geom.n_antennas();
    d.power_dbm = power_override.value_or(cfg.transmit_power_dbm);
    SecrecyReport report;
    switch (task.scheme) {
      case Scheme::FSA: {
        const FsaSolveResult r = bcd_solve(geom, scenario, limits, optimizer);
        report = r.report;
        row.converged = r.converged;
        row.iterations = r.iterations;
        d.plan = r.plan;
        d.beamformer = r.beamformer;
        break;
      }
      case Scheme::FDA: {
        const FsaSolveResult r = fda_solve(geom, scenario, limits, optimizer);
        report = r.report;
        row.converged = r.converged;
        row.iterations = r.iterations;
        d.plan = r.plan;
        d.beamformer = r.beamformer;
        break;
      }
      case Scheme::FPA: {
        const FpaSolveResult r = fpa_solve(geom, scenario, limits);
        report = r.report;
        row.converged = true;
        row.iterations = 1;
        d.plan = r.plan;
        d.beamformer = r.beamformer;
        break;
      }
      case Scheme::MA: {
        const MaSolveResult r = ma_solve(geom, scenario, limits, optimizer);
        report = r.report;
        row.converged = r.converged;
        row.iterations = r.iterations;
        d.positions = r.configuration.positions_m();
        d.beamformer = r.beamformer;
        break;
      }
    }
    row.secrecy_bps_hz = report.secrecy_rate_bps_hz;
    row.rate_bob_bps_hz = report.rate_bob_bps_hz;
    row.rate_eves_bps_hz = report.rate_eves_bps_hz;
    row_detail = std::move(d);
  } catch (const std::exception&) {
    row.converged = false;  // failed row: rate fields stay empty
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start_time)
                    .count();
  return {row, row_detail};
}

}  // namespace detail

/// Runs every (grid value, scheme) pair. Rows are computed in parallel across
/// worker threads but collected in deterministic (grid, scheme) order, and
/// each row derives its own seed, so output is independent of thread count.
inline SweepOutcome run_sweep(const ExperimentConfig& cfg) {
  std::vector<detail::RowTask> tasks;
  for (const double value : cfg.sweep_grid) {
    for (const Scheme scheme : cfg.schemes) tasks.push_back({value, scheme});
  }

  SweepOutcome outcome;
  outcome.rows.resize(tasks.size());
  outcome.details.resize(tasks.size());

  const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      auto [row, row_detail] = detail::run_row(cfg, tasks[i]);
      outcome.rows[i] = std::move(row);
      outcome.details[i] = std::move(row_detail);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        auto [row, row_detail] = detail::run_row(cfg, tasks[i]);
        outcome.rows[i] = std::move(row);
        outcome.details[i] = std::move(row_detail);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  // Canonical ordering: grid-major, scheme order as in the Scheme enum.
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (outcome.rows[a].sweep_value != outcome.rows[b].sweep_value) {
      return outcome.rows[a].sweep_value < outcome.rows[b].sweep_value;
    }
    return static_cast<int>(outcome.rows[a].scheme) < static_cast<int>(outcome.rows[b].scheme);
  });
  SweepOutcome sorted;
  sorted.rows.reserve(order.size());
  sorted.details.reserve(order.size());
  for (const std::size_t i : order) {
    sorted.rows.push_back(std::move(outcome.rows[i]));
    sorted.details.push_back(std::move(outcome.details[i]));
  }
  return sorted;
}

/// 12-significant-digit decimal formatting used everywhere in CSV output.
inline std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline std::string results_csv_header() {
  return "sweep_var,scheme,secrecy_bps_hz,rate_bob,rate_eves,converged,iters,wall_ms";
}

inline std::string result_row_csv(const ResultRow& row) {
  std::ostringstream out;
  out << format_number(row.sweep_value) << ',' << scheme_name(row.scheme) << ','
      << (row.secrecy_bps_hz ? format_number(*row.secrecy_bps_hz) : "") << ','
      << (row.rate_bob_bps_hz ? format_number(*row.rate_bob_bps_hz) : "") << ','
      << (row.rate_eves_bps_hz ? format_number(*row.rate_eves_bps_hz) : "") << ','
      << (row.converged ? "true" : "false") << ',' << row.iterations << ','
      << format_number(row.wall_ms);
  return out.str();
}

inline void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << results_csv_header() << '\n';
  for (const ResultRow& row : rows) out << result_row_csv(row) << '\n';
}

/// Recomputes a row's secrecy report from its recorded solver state.
inline SecrecyReport rederive_report(const ExperimentConfig& cfg, const RowDetail& detail) {
  const ArrayGeometry geom = cfg.make_geometry(detail.n_antennas);
  const Scenario scenario = cfg.make_scenario(detail.power_dbm);
  if (detail.positions) {
    const ChannelVector h_b = ma_channel(geom, *detail.positions, scenario.bob());
    std::vector<ChannelVector> h_e;
    for (const Terminal& eve : scenario.eves()) {
      h_e.push_back(ma_channel(geom, *detail.positions, eve));
    }
    SecrecyReport report;
    report.rate_bob_bps_hz = rate_bob(scenario, h_b, detail.beamformer);
    report.rate_eves_bps_hz = rate_eves(scenario, h_e, detail.beamformer);
    report.unclamped_difference = report.rate_bob_bps_hz - report.rate_eves_bps_hz;
    report.secrecy_rate_bps_hz = std::max(report.unclamped_difference, 0.0);
    return report;
  }
  return secrecy_rate(geom, *detail.plan, scenario, detail.beamformer);
}

enum class ScanAxis { Angle, Range };

struct ScanPoint {
  double coordinate = 0.0;       // spatial angle u or range [m]
  double normalized_gain = 0.0;  // peak-1 array gain
};

/// Samples the normalized beam pattern |a^H(site) w|^2 / ||w||^2 along one
/// coordinate axis, the other coordinate held at the reference site's value.
inline std::vector<ScanPoint> beam_pattern_scan(const ArrayGeometry& geom, double carrier_hz,
                                                const Eigen::VectorXd& increments_hz,
                                                const Beamformer& w, ScanAxis axis,
                                                const std::vector<double>& grid,
                                                const Terminal& reference) {
  if (grid.empty()) throw ValidationError("beam scan grid must be non-empty");
  std::vector<ScanPoint> points;
  points.reserve(grid.size());
  const double w_norm2 = w.weights.squaredNorm();
  double peak = 0.0;
  for (const double coord : grid) {
    const double u = axis == ScanAxis::Angle ? coord : reference.spatial_angle();
    const double r = axis == ScanAxis::Range ? coord : reference.range_m();
    const Eigen::VectorXcd a = steering_vector_raw(geom, carrier_hz, increments_hz, u, r, 0.0);
    const double gain = std::norm(a.dot(w.weights)) / w_norm2;
    points.push_back({coord, gain});
    peak = std::max(peak, gain);
  }
  if (peak > 0.0) {
    for (ScanPoint& p : points) p.normalized_gain /= peak;
  }
  return points;
}

inline std::vector<ScanPoint> beam_pattern_scan(const ArrayGeometry& geom,
                                                const FrequencyPlan& plan, const Beamformer& w,
                                                ScanAxis axis, const std::vector<double>& grid,
                                                const Terminal& reference) {
  return beam_pattern_scan(geom, plan.carrier_hz(), plan.increments_hz(), w, axis, grid,
                           reference);
}

struct ConvergenceRun {
  int n_antennas = 0;
  OptimizationTrace trace;
  bool converged = false;
  int iterations = 0;
};

/// Convergence traces of the full solver across array sizes.
inline std::vector<ConvergenceRun> convergence_study(const ExperimentConfig& cfg,
                                                     const std::vector<int>& antenna_counts = {
                                                         13, 17, 23, 27}) {
  std::vector<ConvergenceRun> runs;
  runs.reserve(antenna_counts.size());
  for (const int n : antenna_counts) {
    const ArrayGeometry geom = cfg.make_geometry(n);
    const Scenario scenario = cfg.make_scenario();
    OptimizerConfig optimizer = cfg.optimizer;
    optimizer.rng_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(n));
    const FsaSolveResult result = bcd_solve(geom, scenario, cfg.limits, optimizer);
    runs.push_back({n, result.trace, result.converged, result.iterations});
  }
  return runs;
}

inline nlohmann::json trace_to_json(const OptimizationTrace& trace) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const IterationRecord& rec : trace.iterations) {
    nlohmann::json row{{"iteration", rec.iteration},
                       {"objective_bps_hz", rec.objective_bps_hz},
                       {"beamformer_gain", rec.beamformer_gain},
                       {"fiv_gain", rec.fiv_gain},
                       {"carrier_gain", rec.carrier_gain},
                       {"fiv_steps", rec.fiv_steps},
                       {"carrier_steps", rec.carrier_steps}};
    if (rec.carrier_hz > 0.0) row["carrier_hz"] = rec.carrier_hz;
    if (rec.increments_hz.size() > 0) {
      row["increments_hz"] =
          std::vector<double>(rec.increments_hz.data(),
                              rec.increments_hz.data() + rec.increments_hz.size());
    }
    iterations.push_back(std::move(row));
  }
  return nlohmann::json{{"start_index", trace.start_index},
                        {"converged", trace.converged},
                        {"final_objective_bps_hz", trace.final_objective_bps_hz},
                        {"iterations", std::move(iterations)}};
}

inline nlohmann::json solve_result_to_json(const FsaSolveResult& result) {
  std::vector<double> inc(result.plan.increments_hz().data(),
                          result.plan.increments_hz().data() + result.plan.increments_hz().size());
  std::vector<std::vector<double>> weights;
  weights.reserve(result.beamformer.weights.size());
  for (Eigen::Index i = 0; i < result.beamformer.weights.size(); ++i) {
    weights.push_back({result.beamformer.weights[i].real(), result.beamformer.weights[i].imag()});
  }
  return nlohmann::json{{"carrier_hz", result.plan.carrier_hz()},
                        {"increments_hz", inc},
                        {"beamformer", weights},
                        {"rate_bob_bps_hz", result.report.rate_bob_bps_hz},
                        {"rate_eves_bps_hz", result.report.rate_eves_bps_hz},
                        {"secrecy_rate_bps_hz", result.report.secrecy_rate_bps_hz},
                        {"unclamped_difference", result.report.unclamped_difference},
                        {"converged", result.converged},
                        {"iterations", result.iterations},
                        {"trace", trace_to_json(result.trace)}};
}

}  // namespace fsa
