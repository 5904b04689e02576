#include "anlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anlab {
namespace {

// Exact int_{x0}^{x0+L} (f0 + (f1 - f0)(r - x0)/L) r^2 dr.
double linear_times_r2(double x0, double len, double f0, double f1) noexcept {
  const double x0sq = x0 * x0;
  const double w0 = 0.5 * x0sq + x0 * len / 3.0 + len * len / 12.0;
  const double w1 = 0.5 * x0sq + 2.0 * x0 * len / 3.0 + 0.25 * len * len;
  return len * (f0 * w0 + f1 * w1);
}

}  // namespace

double interpolate(std::span<const double> samples, const RadialGrid& grid,
                   double r, Parity parity) {
  const auto n = grid.cells();
  const double h = grid.spacing();
  const double r0 = grid.node(0);
  if (r <= r0) {
    return parity == Parity::Odd ? samples[0] * (std::max(r, 0.0) / r0)
                                 : samples[0];
  }
  const double pos = r / h - 0.5;
  auto j = static_cast<std::size_t>(pos);
  if (j >= n - 1) j = n - 2;
  const double frac = pos - static_cast<double>(j);
  return samples[j] + frac * (samples[j + 1] - samples[j]);
}

double integrate_r2(std::span<const double> density, const RadialGrid& grid,
                    double r_lo, double r_hi) {
  const double big_r = grid.outer_radius();
  if (r_lo < 0.0 || r_hi < r_lo || r_hi > big_r * (1.0 + 1e-12)) {
    throw std::invalid_argument("integration range outside [0, R]");
  }
  r_hi = std::min(r_hi, big_r);
  if (r_hi == r_lo) return 0.0;

  const auto n = grid.cells();
  const double h = grid.spacing();
  double total = 0.0;

  // Breakpoints: r_lo, every node strictly inside, r_hi.
  double x_prev = r_lo;
  double f_prev = interpolate(density, grid, r_lo, Parity::Even);

  // First node index strictly greater than r_lo.
  std::size_t j = 0;
  if (r_lo >= grid.node(0)) {
    j = static_cast<std::size_t>(std::floor(r_lo / h - 0.5)) + 1;
  }
  for (; j < n && grid.node(j) < r_hi; ++j) {
    const double x = grid.node(j);
    if (x <= x_prev) continue;
    total += linear_times_r2(x_prev, x - x_prev, f_prev, density[j]);
    x_prev = x;
    f_prev = density[j];
  }
  const double f_hi = interpolate(density, grid, r_hi, Parity::Even);
  total += linear_times_r2(x_prev, r_hi - x_prev, f_prev, f_hi);
  return total;
}

}  // namespace anlab
