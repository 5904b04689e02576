#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "anlab/field_state.hpp"
#include "anlab/model.hpp"

namespace anlab::testing {

inline FieldState turok_spergel_state(const RadialGrid& grid, double t,
                                      double blowup_time = 0.0) {
  FieldState s = zero_state(grid, t);
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const auto exact = turok_spergel(t, grid.node(j), blowup_time);
    s.u[j] = exact.u;
    s.v[j] = exact.u_t;
  }
  return s;
}

inline double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace anlab::testing
