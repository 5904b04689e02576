#include "anlab/field_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anlab {

RadialGrid::RadialGrid(double outer_radius, std::size_t cells)
    : outer_radius_{outer_radius},
      cells_{cells},
      spacing_{outer_radius / static_cast<double>(cells)} {
  if (!(outer_radius > 0.0) || !std::isfinite(outer_radius)) {
    throw std::invalid_argument("grid outer radius must be positive and finite");
  }
  if (cells < 8) {
    std::ostringstream msg;
    msg << "grid needs at least 8 cells, got " << cells;
    throw std::invalid_argument(msg.str());
  }
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(cells_);
  for (std::size_t j = 0; j < cells_; ++j) r[j] = node(j);
  return r;
}

RadialGrid make_grid(double outer_radius, std::size_t cells) {
  return RadialGrid{outer_radius, cells};
}

FieldState zero_state(const RadialGrid& grid, double t) {
  return FieldState{t, grid, std::vector<double>(grid.cells(), 0.0),
                    std::vector<double>(grid.cells(), 0.0)};
}

bool all_finite(const FieldState& state) noexcept {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::isfinite(state.t) &&
         std::all_of(state.u.begin(), state.u.end(), finite) &&
         std::all_of(state.v.begin(), state.v.end(), finite);
}

void validate(const FieldState& state) {
  const auto n = state.grid.cells();
  if (state.u.size() != n || state.v.size() != n) {
    throw std::invalid_argument("field arrays do not match the grid size");
  }
  if (!all_finite(state)) {
    throw std::invalid_argument("field state contains non-finite values");
  }
}

}  // namespace anlab
