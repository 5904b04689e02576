#pragma once

#include <string_view>
#include <vector>

#include "anlab/field_state.hpp"

namespace anlab {

/// Which semilinear equation is being evolved. Every model-dependent routine
/// takes this explicitly; there is no global default.
enum class ModelKind { WaveMap, AdkinsNappi };

std::string_view to_string(ModelKind kind) noexcept;

/// Accepts "wavemap" / "wave_map" and "adkins_nappi" / "adkinsnappi".
ModelKind parse_model_kind(std::string_view name);

/// w(u) = u - sin(u) cos(u). Summed as a series for |u| < 1/2 so that the
/// O(u^3) value keeps full relative precision.
double winding_primitive(double u) noexcept;

/// (u - sin u cos u)(1 - cos 2u) / r^4, the Adkins-Nappi repulsion.
double repulsive_term(double u, double r) noexcept;

/// N(u, r) in u_tt = u_rr + (2/r) u_r - N(u, r).
/// Throws std::domain_error for r <= 0.
double nonlinearity(double u, double r, ModelKind kind);

/// I(z) = (z^2 - sin^2 z) / 2, the primitive of w.
double potential_I(double z) noexcept;

struct ExactSample {
  double u;
  double u_t;
  double u_r;
};

/// u = 2 arctan(r / (T0 - t)) and its exact first derivatives.
/// Throws std::domain_error once t >= T0 or for r < 0.
ExactSample turok_spergel(double t, double r, double blowup_time);

/// Q = w(u(R)) / pi with u(0) = 0 implied; u(R) is extrapolated from the two
/// outermost cells. A profile rising from 0 to pi has Q = 1.
double winding_number(const FieldState& state);

/// V(r_j) = int_{r_j}^{R} w(u(s)) / s^2 ds, with w linear in s^3 between
/// nodes (exact for constants and for the cubic onset at the origin) and the
/// 1/s^2 weight integrated exactly. V(R) = 0.
std::vector<double> gauge_potential(const FieldState& state);

}  // namespace anlab
