#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anlab/initial_data.hpp"
#include "anlab/model.hpp"
#include "anlab/solver.hpp"

namespace anlab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryKind { Dirichlet, Exact, Outgoing };
enum class DataFamily { TurokSpergel, Gaussian, Static };

std::string_view to_string(BoundaryKind kind) noexcept;
std::string_view to_string(DataFamily family) noexcept;

// Flat `[section] key = value` configuration. Every key is addressable as
// "section.key" through apply_setting.
struct RunConfig {
  ModelKind model = ModelKind::AdkinsNappi;

  double outer_radius = 2.5;
  std::size_t cells = 1024;

  double t_start = -1.0;
  double t_end = 0.0;
  double cfl = 0.5;

  BoundaryKind boundary = BoundaryKind::Dirichlet;
  double boundary_value = 3.141592653589793;
  double boundary_blowup_time = 0.0;

  DataFamily family = DataFamily::Gaussian;
  double sigma = 0.5;
  double power = 2.0;
  double data_blowup_time = 0.0;
  double scale = 1.0;
  std::string profile_path;  ///< static family: load instead of solving

  double static_r_max = 50.0;
  std::size_t static_cells = 8192;
  double static_tol = 1e-10;

  std::string output_dir = "anlab_out";
  std::size_t snapshot_stride = 100;

  double lambda = 0.5;
  std::vector<double> report_times;
  double blowup_threshold = 0.0;

  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Sets one "section.key" entry; throws ConfigError for unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value);

/// Applies a "section.key=value" override.
void apply_override(RunConfig& config, std::string_view assignment);

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

void emit_config(std::ostream& out, const RunConfig& config);
void save_config(const std::filesystem::path& path, const RunConfig& config);

/// Cross-field checks; throws ConfigError.
void validate(const RunConfig& config);

SolverConfig solver_config(const RunConfig& config);

/// Builds the initial data family; the static family solves (or loads) a
/// profile first.
InitialData initial_data_family(const RunConfig& config);

std::vector<double> parse_real_list(std::string_view text);

}  // namespace anlab::cli
