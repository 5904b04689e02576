#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "anlab/field_state.hpp"
#include "anlab/model.hpp"

// Snapshot record, schema 1:
//
//   # anlab snapshot
//   schema = 1
//   t = <time>
//   N = <cells>
//   R = <outer radius>
//   model = wavemap | adkins_nappi
//   <optional extra key = value lines>
//   columns = r u v
//   <N rows: r_j u_j v_j>
//
// All reals are written with 17 significant digits, so reading a record back
// reproduces the state bit for bit.

namespace anlab {

class SnapshotFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSnapshotSchema = 1;

struct SnapshotRecord {
  FieldState state;
  ModelKind model;
  std::map<std::string, std::string> extra;
};

void write_snapshot(std::ostream& out, const FieldState& state, ModelKind model,
                    const std::map<std::string, std::string>& extra = {});

SnapshotRecord read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const FieldState& state,
                   ModelKind model,
                   const std::map<std::string, std::string>& extra = {});

SnapshotRecord load_snapshot(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`
/// (17 significant digits).
std::string format_real(double value);

/// Strict parse of a whole string as a double; throws std::invalid_argument.
double parse_real(std::string_view text);

}  // namespace anlab
