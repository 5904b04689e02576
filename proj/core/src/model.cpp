#include "anlab/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anlab {
namespace {

// w(u) = sum_k c_k u^(2k+1), c_k = (-1)^(k+1) 4^k / (2k+1)!.
constexpr std::array<double, 10> kWindingSeries = [] {
  std::array<double, 10> c{};
  double factorial = 1.0;  // (2k+1)!
  double power = 1.0;      // 4^k
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    factorial *= (2.0 * k) * (2.0 * k + 1.0);
    power *= 4.0;
    c[i] = (i % 2 == 0 ? 1.0 : -1.0) * power / factorial;
  }
  return c;
}();

constexpr double kSeriesCutoff = 0.5;

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::WaveMap:
      return "wavemap";
    case ModelKind::AdkinsNappi:
      return "adkins_nappi";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "wavemap" || name == "wave_map") return ModelKind::WaveMap;
  if (name == "adkins_nappi" || name == "adkinsnappi") {
    return ModelKind::AdkinsNappi;
  }
  throw std::invalid_argument("unknown model '" + std::string{name} +
                              "' (expected wavemap or adkins_nappi)");
}

double winding_primitive(double u) noexcept {
  if (std::abs(u) >= kSeriesCutoff) return u - 0.5 * std::sin(2.0 * u);
  const double u2 = u * u;
  double sum = 0.0;
  for (auto it = kWindingSeries.rbegin(); it != kWindingSeries.rend(); ++it) {
    sum = sum * u2 + *it;
  }
  return sum * u2 * u;
}

double repulsive_term(double u, double r) noexcept {
  const double s = std::sin(u);
  const double r2 = r * r;
  // 1 - cos 2u = 2 sin^2 u, free of cancellation near u = 0.
  return winding_primitive(u) * (2.0 * s * s) / (r2 * r2);
}

double nonlinearity(double u, double r, ModelKind kind) {
  if (!(r > 0.0)) throw std::domain_error("nonlinearity needs r > 0");
  const double wave_map = std::sin(2.0 * u) / (r * r);
  if (kind == ModelKind::WaveMap) return wave_map;
  return wave_map + repulsive_term(u, r);
}

double potential_I(double z) noexcept {
  if (std::abs(z) >= kSeriesCutoff) {
    const double s = std::sin(z);
    return 0.5 * (z * z - s * s);
  }
  // Term-wise primitive of the w series: c_k z^(2k+2) / (2k+2).
  const double z2 = z * z;
  double sum = 0.0;
  for (std::size_t i = kWindingSeries.size(); i-- > 0;) {
    sum = sum * z2 + kWindingSeries[i] / (2.0 * static_cast<double>(i) + 4.0);
  }
  return sum * z2 * z2;
}

ExactSample turok_spergel(double t, double r, double blowup_time) {
  const double tau = blowup_time - t;
  if (!(tau > 0.0)) {
    throw std::domain_error("Turok-Spergel solution is undefined for t >= T0");
  }
  if (r < 0.0) throw std::domain_error("Turok-Spergel solution needs r >= 0");
  const double denom = tau * tau + r * r;
  return {2.0 * std::atan2(r, tau), 2.0 * r / denom, 2.0 * tau / denom};
}

double winding_number(const FieldState& state) {
  const auto n = state.u.size();
  if (n < 2) throw std::invalid_argument("winding number needs two cells");
  const double u_outer = 1.5 * state.u[n - 1] - 0.5 * state.u[n - 2];
  return winding_primitive(u_outer) / std::numbers::pi;
}

std::vector<double> gauge_potential(const FieldState& state) {
  const auto& grid = state.grid;
  const auto n = grid.cells();
  std::vector<double> w(n + 1);
  std::vector<double> r(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = winding_primitive(state.u[j]);
    r[j] = grid.node(j);
  }
  w[n] = winding_primitive(1.5 * state.u[n - 1] - 0.5 * state.u[n - 2]);
  r[n] = grid.outer_radius();

  // int_a^b (w_a + (w_b - w_a)(s^3 - a^3)/(b^3 - a^3)) / s^2 ds
  auto segment = [](double a, double b, double wa, double wb) {
    const double inv = 1.0 / a - 1.0 / b;
    const double cubic = (b * b * b - a * a * a);
    const double cubic_part = 0.5 * (b * b - a * a) - a * a * a * inv;
    return wa * inv + (wb - wa) / cubic * cubic_part;
  };

  std::vector<double> potential(n, 0.0);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += segment(r[j], r[j + 1], w[j], w[j + 1]);
    potential[j] = acc;
  }
  return potential;
}

}  // namespace anlab
