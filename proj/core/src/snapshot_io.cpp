#include "anlab/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace anlab {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string{s.substr(first, last - first + 1)};
}

std::size_t parse_count(const std::string& text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw SnapshotFormatError("bad cell count '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general, 17);
  return std::string(buffer, ptr);
}

double parse_real(std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("not a real number: '" + std::string{text} + "'");
  }
  return value;
}

void write_snapshot(std::ostream& out, const FieldState& state, ModelKind model,
                    const std::map<std::string, std::string>& extra) {
  out << "# anlab snapshot\n"
      << "schema = " << kSnapshotSchema << '\n'
      << "t = " << format_real(state.t) << '\n'
      << "N = " << state.grid.cells() << '\n'
      << "R = " << format_real(state.grid.outer_radius()) << '\n'
      << "model = " << to_string(model) << '\n';
  for (const auto& [key, value] : extra) out << key << " = " << value << '\n';
  out << "columns = r u v\n";
  for (std::size_t j = 0; j < state.grid.cells(); ++j) {
    out << format_real(state.grid.node(j)) << ' ' << format_real(state.u[j])
        << ' ' << format_real(state.v[j]) << '\n';
  }
}

SnapshotRecord read_snapshot(std::istream& in) {
  std::string line;
  std::map<std::string, std::string> header;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw SnapshotFormatError("expected 'key = value' in header: " + text);
    }
    const std::string key = trim(std::string_view{text}.substr(0, eq));
    const std::string value = trim(std::string_view{text}.substr(eq + 1));
    if (key == "columns") {
      if (value != "r u v") {
        throw SnapshotFormatError("unsupported columns '" + value + "'");
      }
      saw_columns = true;
      break;
    }
    if (!header.emplace(key, value).second) {
      throw SnapshotFormatError("duplicate header key '" + key + "'");
    }
  }
  if (!saw_columns) throw SnapshotFormatError("snapshot header is incomplete");

  auto take = [&](const std::string& key) {
    auto it = header.find(key);
    if (it == header.end()) {
      throw SnapshotFormatError("snapshot header lacks '" + key + "'");
    }
    std::string value = it->second;
    header.erase(it);
    return value;
  };

  try {
    if (take("schema") != std::to_string(kSnapshotSchema)) {
      throw SnapshotFormatError("unsupported snapshot schema");
    }
    const double t = parse_real(take("t"));
    const std::size_t cells = parse_count(take("N"));
    const double outer = parse_real(take("R"));
    const ModelKind model = parse_model_kind(take("model"));

    SnapshotRecord record{zero_state(make_grid(outer, cells), t), model,
                          std::move(header)};
    auto& state = record.state;
    for (std::size_t j = 0; j < cells; ++j) {
      if (!std::getline(in, line)) {
        throw SnapshotFormatError("snapshot ends before all rows were read");
      }
      std::istringstream row{line};
      std::string r_text;
      std::string u_text;
      std::string v_text;
      std::string excess;
      if (!(row >> r_text >> u_text >> v_text) || (row >> excess)) {
        throw SnapshotFormatError("malformed snapshot row: " + line);
      }
      const double r = parse_real(r_text);
      if (std::abs(r - state.grid.node(j)) >
          1e-12 * state.grid.outer_radius()) {
        throw SnapshotFormatError("row radius does not match the grid");
      }
      state.u[j] = parse_real(u_text);
      state.v[j] = parse_real(v_text);
    }
    return record;
  } catch (const std::invalid_argument& err) {
    throw SnapshotFormatError(err.what());
  }
}

void save_snapshot(const std::filesystem::path& path, const FieldState& state,
                   ModelKind model,
                   const std::map<std::string, std::string>& extra) {
  std::ofstream out{path};
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_snapshot(out, state, model, extra);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SnapshotRecord load_snapshot(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_snapshot(in);
}

}  // namespace anlab
