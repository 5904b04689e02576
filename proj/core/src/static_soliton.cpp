#include "anlab/static_soliton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "anlab/diagnostics.hpp"
#include "anlab/model.hpp"

namespace anlab {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 2>;

constexpr double kPi = std::numbers::pi;
constexpr double kOvershootMargin = 0.01;

// u'' = -(2/r) u' + N(u, r) for the Adkins-Nappi nonlinearity.
struct StaticSystem {
  void operator()(const OdeState& y, OdeState& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -2.0 * y[1] / r + nonlinearity(y[0], r, ModelKind::AdkinsNappi);
  }
};

double series_start(double slope, double r_max) {
  return std::min(1e-4 * r_max, 1e-2 / slope);
}

OdeState series_state(double slope, double r) {
  const double cubic = static_series_cubic(slope);
  return {slope * r + cubic * r * r * r, slope + 3.0 * cubic * r * r};
}

// Around u = pi the linearisation has modes r and r^-2; the coefficient of
// the growing one is (d' + 2 d / r) / 3 with d = u - pi.
ShotOutcome classify_terminal(double r, const OdeState& y) {
  if (y[0] < 0.5 * kPi) return ShotOutcome::Undershoot;
  const double d = y[0] - kPi;
  const double growing = (y[1] + 2.0 * d / r) / 3.0;
  return growing > 0.0 ? ShotOutcome::Overshoot : ShotOutcome::Undershoot;
}

// Laplacian exact for a r + b r^3: (7/3) plain centered - (4/3) conservative.
double regular_laplacian(const RadialGrid& grid, std::span<const double> u,
                         std::size_t j) {
  const double h = grid.spacing();
  const double r = grid.node(j);
  const double u_prev = j == 0 ? -u[0] : u[j - 1];
  const double u_next = u[j + 1];
  const double plain = (u_next - 2.0 * u[j] + u_prev) / (h * h) +
                       (u_next - u_prev) / (h * r);
  const double r_lo = grid.lower_face(j);
  const double r_hi = grid.upper_face(j);
  const double conservative =
      (r_hi * r_hi * (u_next - u[j]) - r_lo * r_lo * (u[j] - u_prev)) /
      (h * h * r * r);
  return (7.0 * plain - 4.0 * conservative) / 3.0;
}

}  // namespace

double static_series_cubic(double slope) noexcept {
  const double a3 = slope * slope * slope;
  return 2.0 * (a3 * slope * slope - a3) / 15.0;
}

FieldState StaticProfile::as_state() const {
  return FieldState{0.0, grid, u, std::vector<double>(u.size(), 0.0)};
}

double StaticProfile::value_at(double r) const {
  const auto n = grid.cells();
  const double r_last = grid.node(n - 1);
  if (r >= r_last) {
    const double c = (kPi - u[n - 1]) * r_last * r_last;
    return kPi - c / (r * r);
  }
  double x0 = 0.0;
  double x1 = 0.0;
  double f0 = 0.0;
  double f1 = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;
  if (r < grid.node(0)) {
    x0 = -grid.node(0);
    x1 = grid.node(0);
    f0 = -u[0];
    f1 = u[0];
    d0 = u_r[0];
    d1 = u_r[0];
  } else {
    auto j = static_cast<std::size_t>(r / grid.spacing() - 0.5);
    j = std::min(j, n - 2);
    x0 = grid.node(j);
    x1 = grid.node(j + 1);
    f0 = u[j];
    f1 = u[j + 1];
    d0 = u_r[j];
    d1 = u_r[j + 1];
  }
  const double len = x1 - x0;
  const double s = (r - x0) / len;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * len * d0 +
         (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * len * d1;
}

ShotResult shoot(double slope, double r_max, const ShootingOptions& options) {
  if (!(slope > 0.0)) throw std::invalid_argument("shooting slope must be > 0");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");

  ShotResult result;
  result.r_start = series_start(slope, r_max);
  OdeState y = series_state(slope, result.r_start);

  auto stepper = odeint::make_dense_output(
      options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
  const StaticSystem system;
  stepper.initialize(y, result.r_start, 0.1 * result.r_start);

  result.r.push_back(result.r_start);
  result.u.push_back(y[0]);
  result.u_r.push_back(y[1]);

  const auto samples = options.sample_radii;
  std::size_t next_sample = 0;
  bool decided = false;

  while (stepper.current_time() < r_max) {
    std::pair<double, double> interval;
    try {
      interval = stepper.do_step(system);
    } catch (const odeint::step_adjustment_error& err) {
      throw IntegrationFailure(std::string{"static shooting: "} + err.what());
    }
    if (stepper.current_time_step() < options.min_step) {
      std::ostringstream msg;
      msg << "static shooting step collapsed at r = " << stepper.current_time()
          << " for slope " << slope;
      throw IntegrationFailure(msg.str());
    }
    const double r_hi = std::min(interval.second, r_max);
    while (next_sample < samples.size() && samples[next_sample] <= r_hi) {
      OdeState ys;
      stepper.calc_state(std::max(samples[next_sample], interval.first), ys);
      result.sampled_u.push_back(ys[0]);
      result.sampled_u_r.push_back(ys[1]);
      ++next_sample;
    }

    OdeState current;
    stepper.calc_state(r_hi, current);
    result.r.push_back(r_hi);
    result.u.push_back(current[0]);
    result.u_r.push_back(current[1]);
    if (!std::isfinite(current[0]) || !std::isfinite(current[1])) {
      throw IntegrationFailure("static shooting produced non-finite values");
    }

    if (!decided) {
      if (current[0] > kPi + kOvershootMargin) {
        result.outcome = ShotOutcome::Overshoot;
        decided = true;
      } else if (current[0] < 0.5 * kPi && current[1] < 0.0) {
        result.outcome = ShotOutcome::Undershoot;
        decided = true;
      }
      if (decided) {
        result.r_stop = r_hi;
        result.terminal = current[0];
        if (!options.run_to_end) return result;
      }
    }
  }

  const std::size_t last = result.u.size() - 1;
  if (!decided) {
    result.outcome =
        classify_terminal(result.r[last], {result.u[last], result.u_r[last]});
    result.r_stop = result.r[last];
  }
  result.terminal = result.u[last];
  return result;
}

std::vector<double> static_residual(const StaticProfile& profile) {
  const auto& grid = profile.grid;
  const auto n = grid.cells();
  std::vector<double> residual(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    residual[j] = regular_laplacian(grid, profile.u, j) -
                  nonlinearity(profile.u[j], grid.node(j),
                               ModelKind::AdkinsNappi);
  }
  return residual;
}

double static_term_scale(const StaticProfile& profile) {
  const auto& grid = profile.grid;
  const double h = grid.spacing();
  const auto& u = profile.u;
  double scale = 0.0;
  for (std::size_t j = 0; j + 1 < grid.cells(); ++j) {
    const double r = grid.node(j);
    const double u_prev = j == 0 ? -u[0] : u[j - 1];
    const double second = (u[j + 1] - 2.0 * u[j] + u_prev) / (h * h);
    const double first = (u[j + 1] - u_prev) / (h * r);
    const double angular = std::sin(2.0 * u[j]) / (r * r);
    const double repulsive = repulsive_term(u[j], r);
    scale = std::max({scale, std::abs(second), std::abs(first),
                      std::abs(angular), std::abs(repulsive)});
  }
  return scale;
}

StaticProfile solve_static(double r_max, std::size_t cells, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  const RadialGrid grid = make_grid(r_max, cells);

  constexpr int kScanPoints = 25;
  double lo = 0.0;
  double hi = 0.0;
  ShotOutcome previous = ShotOutcome::Overshoot;
  double previous_slope = 0.0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double slope = std::pow(10.0, -3.0 + 6.0 * i / (kScanPoints - 1));
    const ShotOutcome outcome = shoot(slope, r_max).outcome;
    if (i > 0 && previous == ShotOutcome::Undershoot &&
        outcome == ShotOutcome::Overshoot) {
      lo = previous_slope;
      hi = slope;
      break;
    }
    previous = outcome;
    previous_slope = slope;
  }
  if (!(hi > 0.0)) {
    throw NoBracketError("no undershoot/overshoot bracket in (1e-3, 1e3)");
  }

  while (hi - lo > tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (shoot(mid, r_max).outcome == ShotOutcome::Overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  StaticProfile profile{0.5 * (lo + hi), grid, std::vector<double>(cells),
                        std::vector<double>(cells), 0.0, 0.0};
  const double r_start = series_start(profile.slope, r_max);
  std::vector<double> radii;
  std::size_t first_sampled = 0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double r = grid.node(j);
    if (r < r_start) {
      const OdeState y = series_state(profile.slope, r);
      profile.u[j] = y[0];
      profile.u_r[j] = y[1];
      first_sampled = j + 1;
    } else {
      radii.push_back(r);
    }
  }
  ShootingOptions options;
  options.run_to_end = true;
  options.sample_radii = radii;
  const ShotResult shot = shoot(profile.slope, r_max, options);
  for (std::size_t k = 0; k < shot.sampled_u.size(); ++k) {
    profile.u[first_sampled + k] = shot.sampled_u[k];
    profile.u_r[first_sampled + k] = shot.sampled_u_r[k];
  }

  const FieldState state = profile.as_state();
  profile.winding = winding_number(state);
  profile.energy = energy_slice(state, r_max, ModelKind::AdkinsNappi).total;
  return profile;
}

}  // namespace anlab
