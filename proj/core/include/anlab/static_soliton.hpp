#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "anlab/field_state.hpp"

namespace anlab {

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degree-one static Adkins-Nappi profile sampled on a cell-centered grid
/// over [0, r_max].
struct StaticProfile {
  double slope = 0.0;  ///< u ~ slope * r near the origin
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> u_r;
  double winding = 0.0;
  double energy = 0.0;

  /// t = 0, u_t = 0.
  FieldState as_state() const;

  /// Cubic Hermite interpolation of (u, u_r); odd continuation below the
  /// first node and the pi - c / r^2 tail beyond the last one.
  double value_at(double r) const;
};

/// Leading near-origin coefficient: u = a r + u3 r^3 + O(r^5) with
/// u3 = 2 (a^5 - a^3) / 15.
double static_series_cubic(double slope) noexcept;

enum class ShotOutcome { Undershoot, Overshoot };

struct ShootingOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double min_step = 1e-13;
  /// Keep integrating to r_max after the outcome is known (for sampling).
  bool run_to_end = false;
  /// Radii (increasing) at which the dense output is sampled.
  std::span<const double> sample_radii = {};
};

struct ShotResult {
  ShotOutcome outcome = ShotOutcome::Undershoot;
  double terminal = 0.0;  ///< u at the last integrated radius
  double r_stop = 0.0;
  double r_start = 0.0;
  std::vector<double> r;  ///< accepted step radii
  std::vector<double> u;
  std::vector<double> u_r;
  std::vector<double> sampled_u;  ///< at ShootingOptions::sample_radii
  std::vector<double> sampled_u_r;
};

/// Integrates the static equation outward from the series start with slope
/// `slope`. Overshoot once u > pi + 0.01; undershoot once u < pi/2 while
/// decreasing. Reaching r_max unresolved, the sign of the growing mode
/// around pi decides. Throws IntegrationFailure if the step size collapses.
ShotResult shoot(double slope, double r_max, const ShootingOptions& options = {});

/// u_rr + (2/r) u_r - N(u, r) on nodes 0..N-2. The Laplacian combines the
/// conservative and the plain centered stencils so that it is exact for
/// a r + b r^3, which keeps the truncation error O(h^2) up to the origin.
std::vector<double> static_residual(const StaticProfile& profile);

/// Largest magnitude among the individual terms of the static equation on
/// the same nodes; the scale against which residuals are judged.
double static_term_scale(const StaticProfile& profile);

/// Coarse log scan of slopes in (1e-3, 1e3), then bisection until the
/// bracket has relative width `tol`. Throws NoBracketError if the scan sees
/// no undershoot/overshoot transition.
StaticProfile solve_static(double r_max, std::size_t cells, double tol);

}  // namespace anlab
