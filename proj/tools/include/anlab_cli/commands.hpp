#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "anlab/field_state.hpp"
#include "anlab/model.hpp"
#include "anlab_cli/run_config.hpp"

namespace anlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBlowup = 2;

/// Parses argv and dispatches to a subcommand; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ConvergenceRow {
  std::size_t cells = 0;
  double spacing = 0.0;
  double error = 0.0;
  std::optional<double> order;
};

/// Wave-map Turok-Spergel runs are compared with the exact solution, with
/// one row per level. Other runs are compared level against the next finer
/// level (cell-pair averaging), with one row per level except the finest.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config,
                                              std::span<const std::size_t> levels);

/// Throws ConfigError unless levels are increasing powers of two.
void check_levels(std::span<const std::size_t> levels);

/// Averages adjacent cell pairs until `fine` has `coarse_cells` cells.
std::vector<double> restrict_to(std::span<const double> fine,
                                std::size_t coarse_cells);

struct ReportRow {
  double T = 0.0;
  double t_last = 0.0;
  double ie3 = 0.0;
  double ie4 = 0.0;
  double ie5 = 0.0;
  double eq_non = 0.0;
  double eq_non_split = 0.0;
  double h2 = 0.0;
  double annular = 0.0;
  double els_ratio = 0.0;
};

/// eq_non and eq_non_split are the direct and decomposed evaluations on the
/// same base state at T (interpolated in time when T falls between snapshots).
std::vector<ReportRow> cone_report(std::span<const FieldState> snapshots,
                                   std::span<const double> report_times,
                                   double lambda, ModelKind kind);

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

/// Snapshot records (*.snap) of a directory, ordered by time.
std::vector<FieldState> load_snapshot_dir(const std::filesystem::path& dir,
                                          ModelKind* model = nullptr);

/// Linear interpolation in time between the snapshots bracketing t.
FieldState state_at(std::span<const FieldState> snapshots, double t);

}  // namespace anlab::cli
