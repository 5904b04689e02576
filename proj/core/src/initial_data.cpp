#include "anlab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anlab/model.hpp"

namespace anlab {

FieldState initial_data(const InitialData& family, const RadialGrid& grid,
                        double t_start) {
  FieldState state = zero_state(grid, t_start);
  const auto n = grid.cells();

  if (const auto* ts = std::get_if<TurokSpergelData>(&family)) {
    if (!(ts->blowup_time > t_start)) {
      throw std::invalid_argument("Turok-Spergel data needs T0 > t_start");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto exact = turok_spergel(t_start, grid.node(j), ts->blowup_time);
      state.u[j] = exact.u;
      state.v[j] = exact.u_t;
    }
  } else if (const auto* lump = std::get_if<GaussianLump>(&family)) {
    if (!(lump->sigma > 0.0) || !(lump->power > 0.0)) {
      throw std::invalid_argument("gaussian lump needs sigma > 0 and p > 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.node(j) / lump->sigma;
      state.u[j] = std::numbers::pi * -std::expm1(-std::pow(x, lump->power));
    }
  } else {
    const auto& rescaled = std::get<RescaledStatic>(family);
    if (!(rescaled.scale > 0.0)) {
      throw std::invalid_argument("rescaled static data needs scale > 0");
    }
    if (rescaled.profile.u.empty()) {
      throw std::invalid_argument("rescaled static data needs a solved profile");
    }
    for (std::size_t j = 0; j < n; ++j) {
      state.u[j] = rescaled.profile.value_at(grid.node(j) / rescaled.scale);
    }
  }
  return state;
}

}  // namespace anlab
