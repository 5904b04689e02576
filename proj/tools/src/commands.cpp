#include "anlab_cli/commands.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "anlab/diagnostics.hpp"
#include "anlab/initial_data.hpp"
#include "anlab/snapshot_io.hpp"
#include "anlab/solver.hpp"
#include "anlab/static_soliton.hpp"

namespace anlab::cli {
namespace {

namespace fs = std::filesystem;

// Options shared by every subcommand. Dedicated flags shadow --set, which
// shadows the config file.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out;
  std::optional<std::string> model;
  std::optional<std::size_t> cells;
  std::optional<double> outer_radius;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<std::string> data;
  std::optional<double> lambda;
  std::optional<std::string> report_times;
};

void add_common(CLI::App& app, CommonOptions& o) {
  app.add_option("--config", o.config_path, "Configuration file");
  app.add_option("--set", o.overrides, "Override section.key=value");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--model", o.model, "wavemap | adkins_nappi");
  app.add_option("--N", o.cells, "Number of cells");
  app.add_option("--R", o.outer_radius, "Outer radius");
  app.add_option("--cfl", o.cfl, "dt / h");
  app.add_option("--t-end", o.t_end, "Final time");
  app.add_option("--data", o.data, "turok_spergel | gaussian | static");
  app.add_option("--lambda", o.lambda, "Annulus inner fraction");
  app.add_option("--report-times", o.report_times, "Comma-separated times T");
}

RunConfig assemble(RunConfig config, const CommonOptions& o) {
  for (const auto& assignment : o.overrides) apply_override(config, assignment);
  if (o.out) config.output_dir = *o.out;
  if (o.model) apply_setting(config, "model.kind", *o.model);
  if (o.cells) config.cells = *o.cells;
  if (o.outer_radius) config.outer_radius = *o.outer_radius;
  if (o.cfl) config.cfl = *o.cfl;
  if (o.t_end) config.t_end = *o.t_end;
  if (o.data) apply_setting(config, "data.family", *o.data);
  if (o.lambda) config.lambda = *o.lambda;
  if (o.report_times) apply_setting(config, "diagnostics.report_times", *o.report_times);
  return config;
}

RunConfig assemble(const CommonOptions& o) {
  return assemble(o.config_path.empty() ? RunConfig{} : load_config(o.config_path), o);
}

std::size_t step_index(const RunConfig& config, double t) {
  const double dt = config.cfl * config.outer_radius / static_cast<double>(config.cells);
  return static_cast<std::size_t>(std::llround((t - config.t_start) / dt));
}

double sup_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void write_event(const fs::path& path, const BlowupEvent& event,
                 EvolveStatus status) {
  std::ofstream out{path};
  out << "status = " << to_string(status) << '\n'
      << "t_detect = " << format_real(event.t_detect) << '\n'
      << "sup_gradient = " << format_real(event.sup_gradient) << '\n'
      << "r_star = " << format_real(event.location) << '\n';
}

int cmd_evolve(const CommonOptions& o, const std::string& resume,
               std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::optional<SnapshotRecord> checkpoint;
  if (!resume.empty()) {
    if (!o.config_path.empty()) {
      throw ConfigError("--config and --resume are mutually exclusive");
    }
    const fs::path dir{resume};
    config = assemble(load_config(dir / "checkpoint.cfg"), o);
    checkpoint = load_snapshot(dir / "checkpoint.snap");
  } else {
    config = assemble(o);
  }
  validate(config);

  const SolverConfig solver = solver_config(config);
  FieldState data = checkpoint ? checkpoint->state
                               : initial_data(initial_data_family(config),
                                              solver.grid, config.t_start);
  double flux_offset = 0.0;
  if (checkpoint) {
    if (!(data.grid == solver.grid) || checkpoint->model != config.model) {
      throw ConfigError("checkpoint grid or model differs from the config");
    }
    if (!(data.t < config.t_end)) {
      throw ConfigError("checkpoint time is not before time.t_end");
    }
    if (auto it = checkpoint->extra.find("flux_cum"); it != checkpoint->extra.end()) {
      flux_offset = parse_real(it->second);
    }
  }
  if (config.blowup_threshold <= 0.0) {
    // Resolved once so a resumed run keeps the same threshold.
    const double sup = sup_abs(radial_derivative(data));
    if (sup > 0.0) config.blowup_threshold = 1e3 * sup;
  }
  SolverConfig run_config = solver;
  run_config.blowup_gradient_threshold = config.blowup_threshold;

  const EvolveResult result = evolve(run_config, std::move(data), flux_offset);

  const fs::path dir{config.output_dir};
  fs::create_directories(dir / "snapshots");
  {
    std::ofstream csv{dir / "series.csv"};
    write_csv(csv, result.series);
    if (!csv) throw std::runtime_error("cannot write series.csv");
  }
  for (const auto& snap : result.snapshots) {
    std::ostringstream name;
    name << "snap_" << std::setw(8) << std::setfill('0')
         << step_index(config, snap.t) << ".snap";
    save_snapshot(dir / "snapshots" / name.str(), snap, config.model);
  }
  const auto& rows = result.series.rows;
  save_snapshot(dir / "checkpoint.snap", result.final_state, config.model,
                {{"flux_cum", format_real(rows.back().flux_cumulative)}});
  save_config(dir / "checkpoint.cfg", config);
  if (result.event) write_event(dir / "event.txt", *result.event, result.status);

  for (const auto& warning : result.warnings) err << "warning: " << warning << '\n';
  out << "status = " << to_string(result.status) << '\n'
      << "t_final = " << format_real(result.final_state.t) << '\n'
      << "steps = " << rows.size() - 1 << '\n';
  if (result.event) {
    out << "t_detect = " << format_real(result.event->t_detect) << '\n'
        << "sup_gradient = " << format_real(result.event->sup_gradient) << '\n';
  }
  switch (result.status) {
    case EvolveStatus::Completed:
      return kExitOk;
    case EvolveStatus::BlowupDetected:
      return kExitBlowup;
    case EvolveStatus::Unstable:
      err << "error: " << result.failure << '\n';
      return kExitFailure;
  }
  return kExitFailure;
}

std::vector<std::size_t> parse_levels(const std::string& text) {
  std::vector<std::size_t> levels;
  for (double value : parse_real_list(text)) {
    if (!(value >= 8.0) || value != std::floor(value)) {
      throw ConfigError("levels must be integers >= 8");
    }
    levels.push_back(static_cast<std::size_t>(value));
  }
  return levels;
}

int cmd_converge(const CommonOptions& o, const std::string& levels_text,
                 std::ostream& out) {
  RunConfig config = assemble(o);
  const auto levels = parse_levels(levels_text);
  check_levels(levels);
  config.cells = levels.front();
  validate(config);

  const auto rows = convergence_study(config, levels);
  const fs::path dir{config.output_dir};
  fs::create_directories(dir);
  std::ofstream csv{dir / "convergence.csv"};
  csv << "N,h,error,order\n";
  out << "N,h,error,order\n";
  for (const auto& row : rows) {
    std::ostringstream line;
    line << row.cells << ',' << format_real(row.spacing) << ','
         << format_real(row.error) << ',';
    if (row.order) line << format_real(*row.order);
    csv << line.str() << '\n';
    out << line.str() << '\n';
  }
  return kExitOk;
}

int cmd_static(const CommonOptions& o, std::optional<double> r_max,
               std::optional<double> tol, std::ostream& out) {
  CommonOptions shared = o;
  shared.cells.reset();
  RunConfig config = assemble(shared);
  if (o.cells) config.static_cells = *o.cells;
  if (r_max) config.static_r_max = *r_max;
  if (tol) config.static_tol = *tol;
  validate(config);

  const StaticProfile profile =
      solve_static(config.static_r_max, config.static_cells, config.static_tol);
  const fs::path dir{config.output_dir};
  fs::create_directories(dir);
  save_snapshot(dir / "profile.snap", profile.as_state(), ModelKind::AdkinsNappi,
                {{"slope", format_real(profile.slope)},
                 {"Q", format_real(profile.winding)},
                 {"energy", format_real(profile.energy)}});
  std::ostringstream summary;
  summary << "a = " << format_real(profile.slope) << '\n'
          << "Q = " << format_real(profile.winding) << '\n'
          << "energy = " << format_real(profile.energy) << '\n';
  std::ofstream{dir / "static_summary.txt"} << summary.str();
  out << summary.str();
  return kExitOk;
}

int cmd_report(const CommonOptions& o, const std::string& snapshot_dir,
               std::ostream& out) {
  RunConfig config = assemble(o);
  if (config.report_times.empty()) throw ConfigError("no report times given");
  if (config.lambda < 0.0 || config.lambda > 1.0) {
    throw ConfigError("diagnostics.lambda must lie in [0, 1]");
  }
  ModelKind model = config.model;
  const auto snapshots = load_snapshot_dir(snapshot_dir, &model);
  if (o.model) model = config.model;

  const auto rows = cone_report(snapshots, config.report_times, config.lambda, model);
  const fs::path dir{config.output_dir};
  fs::create_directories(dir);
  std::ofstream csv{dir / "report.csv"};
  write_report_csv(csv, rows);
  write_report_csv(out, rows);
  return kExitOk;
}

}  // namespace

void check_levels(std::span<const std::size_t> levels) {
  if (levels.size() < 2) throw ConfigError("need at least two levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::has_single_bit(levels[i]) || (i > 0 && levels[i] <= levels[i - 1])) {
      throw ConfigError("levels must be increasing powers of two");
    }
  }
}

std::vector<double> restrict_to(std::span<const double> fine,
                                std::size_t coarse_cells) {
  std::vector<double> values(fine.begin(), fine.end());
  while (values.size() > coarse_cells) {
    std::vector<double> half(values.size() / 2);
    for (std::size_t j = 0; j < half.size(); ++j) {
      half[j] = 0.5 * (values[2 * j] + values[2 * j + 1]);
    }
    values = std::move(half);
  }
  if (values.size() != coarse_cells) {
    throw std::invalid_argument("fine grid is not a power-of-two refinement");
  }
  return values;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config,
                                              std::span<const std::size_t> levels) {
  check_levels(levels);
  std::vector<std::future<EvolveResult>> runs;
  for (std::size_t cells : levels) {
    RunConfig level = config;
    level.cells = cells;
    runs.push_back(std::async(std::launch::async, [level] {
      SolverConfig solver = solver_config(level);
      solver.snapshot_stride = std::numeric_limits<std::size_t>::max();
      FieldState data =
          initial_data(initial_data_family(level), solver.grid, level.t_start);
      return evolve(solver, std::move(data));
    }));
  }
  std::vector<FieldState> finals;
  for (auto& run : runs) {
    EvolveResult result = run.get();
    if (result.status != EvolveStatus::Completed) {
      throw std::runtime_error("level with " +
                               std::to_string(result.final_state.grid.cells()) +
                               " cells stopped early: " +
                               std::string{to_string(result.status)});
    }
    finals.push_back(std::move(result.final_state));
  }

  const bool exact = config.model == ModelKind::WaveMap &&
                     config.family == DataFamily::TurokSpergel;
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    const auto& state = finals[i];
    double error = 0.0;
    if (exact) {
      for (std::size_t j = 0; j < state.grid.cells(); ++j) {
        const double u = turok_spergel(state.t, state.grid.node(j),
                                       config.data_blowup_time).u;
        error = std::max(error, std::abs(state.u[j] - u));
      }
    } else {
      if (i + 1 == finals.size()) break;
      const auto finer = restrict_to(finals[i + 1].u, state.grid.cells());
      for (std::size_t j = 0; j < state.grid.cells(); ++j) {
        error = std::max(error, std::abs(state.u[j] - finer[j]));
      }
    }
    ConvergenceRow row{state.grid.cells(), state.grid.spacing(), error, {}};
    if (!rows.empty()) {
      const auto& prev = rows.back();
      row.order = std::log2(prev.error / error) /
                  std::log2(static_cast<double>(row.cells) / prev.cells);
    }
    rows.push_back(row);
  }
  return rows;
}

FieldState state_at(std::span<const FieldState> snapshots, double t) {
  if (snapshots.empty()) throw CoverageError("no snapshots");
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    if (std::abs(snapshots[k].t - t) <= tol) return snapshots[k];
    if (snapshots[k].t > t) {
      if (k == 0) break;
      const auto& a = snapshots[k - 1];
      const auto& b = snapshots[k];
      if (!(a.grid == b.grid)) throw CoverageError("snapshots change grid");
      const double s = (t - a.t) / (b.t - a.t);
      FieldState out = zero_state(a.grid, t);
      for (std::size_t j = 0; j < a.grid.cells(); ++j) {
        out.u[j] = (1.0 - s) * a.u[j] + s * b.u[j];
        out.v[j] = (1.0 - s) * a.v[j] + s * b.v[j];
      }
      return out;
    }
  }
  throw CoverageError("time " + format_real(t) + " is outside the snapshot range");
}

std::vector<ReportRow> cone_report(std::span<const FieldState> snapshots,
                                   std::span<const double> report_times,
                                   double lambda, ModelKind kind) {
  std::vector<ReportRow> rows;
  for (double T : report_times) {
    const ConeFunctionals cone = cone_functionals(snapshots, T, lambda, kind);
    const FieldState base = state_at(snapshots, T);
    const NonconcentrationSplit split = nonconcentration_split(base, kind);
    rows.push_back({T, cone.t_last, cone.ie3, cone.ie4, cone.ie5, split.direct,
                    split.decomposed, cone.h2, cone.annular,
                    pointwise_estimate_check(base, kind).ratio_sup});
  }
  return rows;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "T,t_last,ie3,ie4,ie5,eq_non,eq_non_split,h2,annular,els_ratio\n";
  for (const auto& r : rows) {
    out << format_real(r.T) << ',' << format_real(r.t_last) << ','
        << format_real(r.ie3) << ',' << format_real(r.ie4) << ','
        << format_real(r.ie5) << ',' << format_real(r.eq_non) << ','
        << format_real(r.eq_non_split) << ',' << format_real(r.h2) << ','
        << format_real(r.annular) << ',' << format_real(r.els_ratio) << '\n';
  }
}

std::vector<FieldState> load_snapshot_dir(const fs::path& dir, ModelKind* model) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("snapshot directory " + dir.string() + " not found");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator{dir}) {
    if (entry.is_regular_file() && entry.path().extension() == ".snap") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw CoverageError("no snapshot records in " + dir.string());
  std::vector<FieldState> states;
  std::optional<ModelKind> seen;
  for (const auto& file : files) {
    SnapshotRecord record = load_snapshot(file);
    if (seen && *seen != record.model) {
      throw std::runtime_error("snapshots mix models");
    }
    seen = record.model;
    states.push_back(std::move(record.state));
  }
  std::sort(states.begin(), states.end(),
            [](const FieldState& a, const FieldState& b) { return a.t < b.t; });
  for (std::size_t k = 1; k < states.size(); ++k) {
    if (!(states[k].t > states[k - 1].t)) {
      throw std::runtime_error("duplicate snapshot time " + format_real(states[k].t));
    }
  }
  if (model != nullptr) *model = *seen;
  return states;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial wave map and Adkins-Nappi evolution lab", "anlab"};
  app.require_subcommand(1);

  CommonOptions evolve_opts;
  std::string resume;
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve initial data");
  add_common(*evolve_cmd, evolve_opts);
  evolve_cmd->add_option("--resume", resume, "Resume from a run directory");

  CommonOptions converge_opts;
  std::string levels = "512,1024,2048";
  auto* converge_cmd = app.add_subcommand("converge", "Grid convergence study");
  add_common(*converge_cmd, converge_opts);
  converge_cmd->add_option("--levels", levels, "Comma-separated cell counts");

  CommonOptions static_opts;
  std::optional<double> r_max;
  std::optional<double> tol;
  auto* static_cmd = app.add_subcommand("static", "Solve for the static soliton");
  add_common(*static_cmd, static_opts);
  static_cmd->add_option("--r-max", r_max, "Outer radius of the shooting");
  static_cmd->add_option("--tol", tol, "Relative slope tolerance");

  CommonOptions report_opts;
  std::string snapshot_dir;
  auto* report_cmd = app.add_subcommand("report", "Cone functionals from snapshots");
  add_common(*report_cmd, report_opts);
  report_cmd->add_option("--snapshots", snapshot_dir, "Snapshot directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*evolve_cmd) return cmd_evolve(evolve_opts, resume, out, err);
    if (*converge_cmd) return cmd_converge(converge_opts, levels, out);
    if (*static_cmd) return cmd_static(static_opts, r_max, tol, out);
    if (*report_cmd) return cmd_report(report_opts, snapshot_dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace anlab::cli
