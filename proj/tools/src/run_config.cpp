#include "anlab_cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "anlab/diagnostics.hpp"
#include "anlab/snapshot_io.hpp"
#include "anlab/static_soliton.hpp"

namespace anlab::cli {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string{s.substr(first, last - first + 1)};
}

double to_real(std::string_view key, std::string_view text) {
  try {
    return parse_real(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string{key} + ": expected a real number, got '" +
                      std::string{text} + "'");
  }
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  Int value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError(std::string{key} + ": expected a non-negative integer, got '" +
                      std::string{text} + "'");
  }
  return value;
}

BoundaryKind parse_boundary(std::string_view text) {
  if (text == "dirichlet") return BoundaryKind::Dirichlet;
  if (text == "exact") return BoundaryKind::Exact;
  if (text == "outgoing") return BoundaryKind::Outgoing;
  throw ConfigError("boundary.outer: unknown boundary '" + std::string{text} + "'");
}

DataFamily parse_family(std::string_view text) {
  if (text == "turok_spergel") return DataFamily::TurokSpergel;
  if (text == "gaussian") return DataFamily::Gaussian;
  if (text == "static") return DataFamily::Static;
  throw ConfigError("data.family: unknown family '" + std::string{text} + "'");
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Field real_field(const char* key, Member member) {
  return {key,
          [key, member](RunConfig& c, std::string_view v) { c.*member = to_real(key, v); },
          [member](const RunConfig& c) { return format_real(c.*member); }};
}

template <typename Int, typename Member>
Field integer_field(const char* key, Member member) {
  return {key,
          [key, member](RunConfig& c, std::string_view v) {
            c.*member = to_integer<Int>(key, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

// Order here is the emission order.
const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"model.kind",
       [](RunConfig& c, std::string_view v) {
         try {
           c.model = parse_model_kind(v);
         } catch (const std::invalid_argument& err) {
           throw ConfigError(std::string{"model.kind: "} + err.what());
         }
       },
       [](const RunConfig& c) { return std::string{to_string(c.model)}; }},
      real_field("grid.R", &RunConfig::outer_radius),
      integer_field<std::size_t>("grid.N", &RunConfig::cells),
      real_field("time.t_start", &RunConfig::t_start),
      real_field("time.t_end", &RunConfig::t_end),
      real_field("time.cfl", &RunConfig::cfl),
      {"boundary.outer",
       [](RunConfig& c, std::string_view v) { c.boundary = parse_boundary(v); },
       [](const RunConfig& c) { return std::string{to_string(c.boundary)}; }},
      real_field("boundary.value", &RunConfig::boundary_value),
      real_field("boundary.blowup_time", &RunConfig::boundary_blowup_time),
      {"data.family",
       [](RunConfig& c, std::string_view v) { c.family = parse_family(v); },
       [](const RunConfig& c) { return std::string{to_string(c.family)}; }},
      real_field("data.sigma", &RunConfig::sigma),
      real_field("data.power", &RunConfig::power),
      real_field("data.blowup_time", &RunConfig::data_blowup_time),
      real_field("data.scale", &RunConfig::scale),
      {"data.profile",
       [](RunConfig& c, std::string_view v) { c.profile_path = std::string{v}; },
       [](const RunConfig& c) { return c.profile_path; }},
      real_field("static.r_max", &RunConfig::static_r_max),
      integer_field<std::size_t>("static.N", &RunConfig::static_cells),
      real_field("static.tol", &RunConfig::static_tol),
      {"output.dir",
       [](RunConfig& c, std::string_view v) { c.output_dir = std::string{v}; },
       [](const RunConfig& c) { return c.output_dir; }},
      integer_field<std::size_t>("output.snapshot_stride", &RunConfig::snapshot_stride),
      real_field("diagnostics.lambda", &RunConfig::lambda),
      {"diagnostics.report_times",
       [](RunConfig& c, std::string_view v) {
         try {
           c.report_times = parse_real_list(v);
         } catch (const std::invalid_argument& err) {
           throw ConfigError(std::string{"diagnostics.report_times: "} + err.what());
         }
       },
       [](const RunConfig& c) { return format_list(c.report_times); }},
      real_field("diagnostics.blowup_threshold", &RunConfig::blowup_threshold),
      integer_field<std::uint64_t>("run.seed", &RunConfig::seed),
  };
  return table;
}

}  // namespace

std::string_view to_string(BoundaryKind kind) noexcept {
  switch (kind) {
    case BoundaryKind::Dirichlet:
      return "dirichlet";
    case BoundaryKind::Exact:
      return "exact";
    case BoundaryKind::Outgoing:
      return "outgoing";
  }
  return "dirichlet";
}

std::string_view to_string(DataFamily family) noexcept {
  switch (family) {
    case DataFamily::TurokSpergel:
      return "turok_spergel";
    case DataFamily::Gaussian:
      return "gaussian";
    case DataFamily::Static:
      return "static";
  }
  return "gaussian";
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> values;
  const std::string s = trim(text);
  if (s.empty()) return values;
  std::size_t begin = 0;
  while (begin <= s.size()) {
    const auto comma = s.find(',', begin);
    const auto end = comma == std::string::npos ? s.size() : comma;
    values.push_back(parse_real(std::string_view{s}.substr(begin, end - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return values;
}

void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value) {
  for (const auto& field : fields()) {
    if (key == field.key) {
      field.set(config, trim(value));
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + std::string{key} + "'");
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string{assignment} +
                      "' is not of the form section.key=value");
  }
  apply_setting(config, trim(assignment.substr(0, eq)),
                assignment.substr(eq + 1));
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& err) {
    throw ConfigError(err.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError("key '" + section + "' lies outside any section");
    }
    for (const auto& [key, value] : body) {
      apply_setting(config, section + "." + key, value.data());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in);
}

void emit_config(std::ostream& out, const RunConfig& config) {
  pt::ptree tree;
  for (const auto& field : fields()) {
    const std::string key = field.key;
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (tree.empty() || tree.back().first != section) {
      tree.push_back({section, pt::ptree{}});
    }
    tree.back().second.push_back(
        {key.substr(dot + 1), pt::ptree{field.get(config)}});
  }
  pt::write_ini(out, tree);
}

void save_config(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream out{path};
  if (!out) throw ConfigError("cannot write " + path.string());
  emit_config(out, config);
}

void validate(const RunConfig& config) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(config.outer_radius > 0.0)) fail("grid.R must be positive");
  if (config.cells < 8) fail("grid.N must be at least 8");
  if (!(config.t_start < config.t_end)) fail("time.t_start must precede time.t_end");
  if (!(config.cfl > 0.0) || config.cfl > 1.0) fail("time.cfl must lie in (0, 1]");
  if (config.boundary == BoundaryKind::Exact &&
      !(config.boundary_blowup_time > config.t_start)) {
    fail("boundary.blowup_time must exceed time.t_start");
  }
  switch (config.family) {
    case DataFamily::TurokSpergel:
      if (!(config.data_blowup_time > config.t_start)) {
        fail("data.blowup_time must exceed time.t_start");
      }
      break;
    case DataFamily::Gaussian:
      if (!(config.sigma > 0.0)) fail("data.sigma must be positive");
      if (!(config.power > 0.0)) fail("data.power must be positive");
      break;
    case DataFamily::Static:
      if (!(config.scale > 0.0)) fail("data.scale must be positive");
      break;
  }
  if (!(config.static_r_max > 0.0)) fail("static.r_max must be positive");
  if (config.static_cells < 8) fail("static.N must be at least 8");
  if (!(config.static_tol > 0.0)) fail("static.tol must be positive");
  if (config.output_dir.empty()) fail("output.dir must not be empty");
  if (config.snapshot_stride == 0) fail("output.snapshot_stride must be positive");
  if (config.lambda < 0.0 || config.lambda > 1.0) {
    fail("diagnostics.lambda must lie in [0, 1]");
  }
  for (double T : config.report_times) {
    if (!(T > config.t_start) || !(T < config.t_end) || !(T < 0.0)) {
      fail("report time " + format_real(T) +
           " must lie in (t_start, t_end) and be negative");
    }
  }
  if (!std::isfinite(config.blowup_threshold)) {
    fail("diagnostics.blowup_threshold must be finite");
  }
}

SolverConfig solver_config(const RunConfig& config) {
  SolverConfig solver;
  solver.model = config.model;
  solver.grid = make_grid(config.outer_radius, config.cells);
  solver.cfl = config.cfl;
  solver.t_start = config.t_start;
  solver.t_end = config.t_end;
  switch (config.boundary) {
    case BoundaryKind::Dirichlet:
      solver.outer_bc = DirichletConstant{config.boundary_value};
      break;
    case BoundaryKind::Exact:
      solver.outer_bc = DirichletExact{config.boundary_blowup_time};
      break;
    case BoundaryKind::Outgoing:
      solver.outer_bc = Outgoing{};
      break;
  }
  solver.blowup_gradient_threshold = config.blowup_threshold;
  solver.snapshot_stride = config.snapshot_stride;
  solver.lambda = config.lambda;
  return solver;
}

InitialData initial_data_family(const RunConfig& config) {
  switch (config.family) {
    case DataFamily::TurokSpergel:
      return TurokSpergelData{config.data_blowup_time};
    case DataFamily::Gaussian:
      return GaussianLump{config.sigma, config.power};
    case DataFamily::Static:
      break;
  }
  if (config.profile_path.empty()) {
    return RescaledStatic{
        solve_static(config.static_r_max, config.static_cells, config.static_tol),
        config.scale};
  }
  const auto record = load_snapshot(config.profile_path);
  const auto& state = record.state;
  StaticProfile profile{state.u[0] / state.grid.node(0), state.grid, state.u,
                        radial_derivative(state), winding_number(state), 0.0};
  return RescaledStatic{std::move(profile), config.scale};
}

}  // namespace anlab::cli
