#pragma once

#include <variant>

#include "anlab/field_state.hpp"
#include "anlab/static_soliton.hpp"

namespace anlab {

/// Exact Turok-Spergel slice at the start time.
struct TurokSpergelData {
  double blowup_time = 0.0;
};

/// u = pi (1 - exp(-(r/sigma)^p)), u_t = 0.
struct GaussianLump {
  double sigma = 0.5;
  double power = 2.0;
};

/// u(r) = U(r / scale), u_t = 0, from a solved static profile U.
struct RescaledStatic {
  StaticProfile profile;
  double scale = 1.0;
};

using InitialData = std::variant<TurokSpergelData, GaussianLump, RescaledStatic>;

/// Throws std::invalid_argument for malformed parameters (T0 <= t_start,
/// sigma <= 0, p <= 0, scale <= 0).
FieldState initial_data(const InitialData& family, const RadialGrid& grid,
                        double t_start);

}  // namespace anlab
