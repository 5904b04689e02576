#pragma once

#include <span>

#include "anlab/field_state.hpp"

namespace anlab {

/// Behaviour of a sampled field between the origin and the first node.
/// Odd fields (u, u_t) vanish linearly at r = 0; even fields (u_r, densities)
/// are held at their first-node value.
enum class Parity { Odd, Even };

/// Linear interpolation of node samples at radius r in [0, R]. Beyond the
/// last node the two outermost samples are extrapolated linearly.
double interpolate(std::span<const double> samples, const RadialGrid& grid,
                   double r, Parity parity);

/// int_{r_lo}^{r_hi} f(r) r^2 dr with f piecewise linear through the node
/// samples (even extension below the first node) and the r^2 weight integrated
/// exactly. Linear in the samples. Requires 0 <= r_lo <= r_hi <= R.
double integrate_r2(std::span<const double> density, const RadialGrid& grid,
                    double r_lo, double r_hi);

}  // namespace anlab
