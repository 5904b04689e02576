#pragma once

#include <cstddef>
#include <vector>

namespace anlab {

/// Cell-centered mesh on [0, R]. Node j sits at (j + 1/2) h, so no node ever
/// touches the origin.
class RadialGrid {
 public:
  RadialGrid(double outer_radius, std::size_t cells);

  double outer_radius() const noexcept { return outer_radius_; }
  std::size_t cells() const noexcept { return cells_; }
  double spacing() const noexcept { return spacing_; }

  double node(std::size_t j) const noexcept {
    return (static_cast<double>(j) + 0.5) * spacing_;
  }
  /// Face between node j-1 and node j; lower_face(0) is the origin.
  double lower_face(std::size_t j) const noexcept {
    return static_cast<double>(j) * spacing_;
  }
  double upper_face(std::size_t j) const noexcept {
    return static_cast<double>(j + 1) * spacing_;
  }

  std::vector<double> nodes() const;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  double outer_radius_;
  std::size_t cells_;
  double spacing_;
};

/// Validating factory: R > 0 and at least 8 cells.
RadialGrid make_grid(double outer_radius, std::size_t cells);

/// Sampled (u, u_t) at time t. `v` holds u_t.
struct FieldState {
  double t = 0.0;
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> v;
};

FieldState zero_state(const RadialGrid& grid, double t);

/// Throws std::invalid_argument on size mismatch or non-finite samples.
void validate(const FieldState& state);

bool all_finite(const FieldState& state) noexcept;

}  // namespace anlab
