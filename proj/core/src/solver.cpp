#include "anlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace anlab {
namespace {

double outer_ghost(const FieldState& state, const OuterBoundary& bc) {
  const auto& grid = state.grid;
  const auto n = grid.cells();
  const double u_last = state.u[n - 1];
  return std::visit(
      [&](const auto& b) -> double {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, DirichletConstant>) {
          return 2.0 * b.value - u_last;
        } else if constexpr (std::is_same_v<B, DirichletExact>) {
          // Past T0 the exact profile has collapsed to pi for every r > 0.
          const double edge =
              state.t < b.blowup_time
                  ? turok_spergel(state.t, grid.outer_radius(), b.blowup_time).u
                  : std::numbers::pi;
          return 2.0 * edge - u_last;
        } else {
          const double h = grid.spacing();
          const double big_r = grid.outer_radius();
          const double v_face = 1.5 * state.v[n - 1] - 0.5 * state.v[n - 2];
          return (u_last / h - v_face - (0.5 * u_last - std::numbers::pi) / big_r) /
                 (1.0 / h + 0.5 / big_r);
        }
      },
      bc);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw std::invalid_argument("cfl must lie in (0, 1]");
  }
  if (!(t_start < t_end)) throw std::invalid_argument("need t_start < t_end");
  if (snapshot_stride == 0) {
    throw std::invalid_argument("snapshot_stride must be positive");
  }
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!std::isfinite(blowup_gradient_threshold)) {
    throw std::invalid_argument("blowup threshold must be finite");
  }
  if (const auto* exact = std::get_if<DirichletExact>(&outer_bc);
      exact != nullptr && !(exact->blowup_time > t_start)) {
    throw std::invalid_argument("exact boundary needs T0 > t_start");
  }
}

std::string_view to_string(EvolveStatus status) noexcept {
  switch (status) {
    case EvolveStatus::Completed:
      return "completed";
    case EvolveStatus::BlowupDetected:
      return "blowup";
    case EvolveStatus::Unstable:
      return "unstable";
  }
  return "unknown";
}

void rhs(const FieldState& state, ModelKind kind, const OuterBoundary& bc,
         std::span<double> du, std::span<double> dv) {
  const auto& grid = state.grid;
  const auto n = grid.cells();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const auto& u = state.u;
  const double ghost = outer_ghost(state, bc);
  const bool repulsive = kind == ModelKind::AdkinsNappi;

  for (std::size_t j = 0; j < n; ++j) {
    du[j] = state.v[j];
    const double r = grid.node(j);
    const double r_lo = grid.lower_face(j);
    const double r_hi = grid.upper_face(j);
    // Odd reflection u_{-1} = -u_0 sits behind a zero-area face at j = 0.
    const double u_prev = j == 0 ? -u[0] : u[j - 1];
    const double u_next = j + 1 == n ? ghost : u[j + 1];
    const double lap = (r_hi * r_hi * (u_next - u[j]) -
                        r_lo * r_lo * (u[j] - u_prev)) *
                       inv_h2 / (r * r);

    const double s = std::sin(u[j]);
    const double c = std::cos(u[j]);
    const double r2 = r * r;
    double force = 2.0 * s * c / r2;
    if (repulsive) {
      const double w =
          std::abs(u[j]) < 0.5 ? winding_primitive(u[j]) : u[j] - s * c;
      force += w * (2.0 * s * s) / (r2 * r2);
    }
    dv[j] = lap - force;
  }
}

FieldDerivative rhs(const FieldState& state, ModelKind kind,
                    const OuterBoundary& bc) {
  const auto n = state.grid.cells();
  FieldDerivative d{std::vector<double>(n), std::vector<double>(n)};
  rhs(state, kind, bc, d.du, d.dv);
  return d;
}

Stepper::Stepper(ModelKind kind, OuterBoundary bc, const RadialGrid& grid)
    : kind_{kind}, bc_{bc}, stage_{zero_state(grid, 0.0)} {
  const auto n = grid.cells();
  for (int s = 0; s < 4; ++s) {
    ku_[s].resize(n);
    kv_[s].resize(n);
  }
  next_u_.resize(n);
  next_v_.resize(n);
}

void Stepper::advance(FieldState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(state.grid == stage_.grid)) {
    throw std::invalid_argument("stepper grid does not match the state");
  }
  const auto n = state.grid.cells();
  constexpr double kStageOffset[4] = {0.0, 0.5, 0.5, 1.0};

  for (int s = 0; s < 4; ++s) {
    if (s == 0) {
      rhs(state, kind_, bc_, ku_[0], kv_[0]);
      continue;
    }
    const double a = kStageOffset[s] * dt;
    stage_.t = state.t + a;
    for (std::size_t j = 0; j < n; ++j) {
      stage_.u[j] = state.u[j] + a * ku_[s - 1][j];
      stage_.v[j] = state.v[j] + a * kv_[s - 1][j];
    }
    rhs(stage_, kind_, bc_, ku_[s], kv_[s]);
  }

  const double sixth = dt / 6.0;
  bool finite = true;
  for (std::size_t j = 0; j < n; ++j) {
    next_u_[j] = state.u[j] + sixth * (ku_[0][j] + 2.0 * ku_[1][j] +
                                       2.0 * ku_[2][j] + ku_[3][j]);
    next_v_[j] = state.v[j] + sixth * (kv_[0][j] + 2.0 * kv_[1][j] +
                                       2.0 * kv_[2][j] + kv_[3][j]);
    finite = finite && std::isfinite(next_u_[j]) && std::isfinite(next_v_[j]);
  }
  if (!finite) {
    std::ostringstream msg;
    msg << "non-finite values after step from t = " << state.t;
    throw InstabilityError(msg.str());
  }
  state.u.swap(next_u_);
  state.v.swap(next_v_);
  state.t += dt;
}

FieldState step(const FieldState& state, double dt, ModelKind kind,
                const OuterBoundary& bc) {
  Stepper stepper{kind, bc, state.grid};
  FieldState next = state;
  stepper.advance(next, dt);
  return next;
}

EvolveResult evolve(const SolverConfig& config, FieldState data,
                    double flux_offset, const StepObserver& observer) {
  config.validate();
  validate(data);
  if (!(data.grid == config.grid)) {
    throw std::invalid_argument("initial data grid differs from the config");
  }
  const double dt = config.time_step();
  if (data.t < config.t_start - 1e-12 * dt || !(data.t < config.t_end)) {
    throw std::invalid_argument("initial time outside [t_start, t_end)");
  }

  EvolveResult result{EvolveStatus::Completed, {}, {}, {}, data, {}, {}};
  SeriesRecorder recorder{config.model, config.lambda, flux_offset};
  Stepper stepper{config.model, config.outer_bc, config.grid};

  const auto& first = recorder.record(data);
  double threshold = config.blowup_gradient_threshold;
  if (threshold <= 0.0) {
    threshold = first.sup_u_r > 0.0 ? 1e3 * first.sup_u_r
                                    : std::numeric_limits<double>::infinity();
  }

  auto k = static_cast<std::size_t>(
      std::floor((data.t - config.t_start) / dt + 1e-9));
  FieldState state = std::move(data);
  if (observer) observer(state);
  result.snapshots.push_back(state);

  const double r0 = config.grid.node(0);
  std::vector<double> slopes{std::abs(state.u[0]) / r0};
  bool slope_warned = false;

  while (state.t < config.t_end) {
    double t_next = std::min(config.t_start + static_cast<double>(k + 1) * dt,
                             config.t_end);
    ++k;
    if (!(t_next > state.t)) continue;
    try {
      stepper.advance(state, t_next - state.t);
    } catch (const InstabilityError& err) {
      result.status = EvolveStatus::Unstable;
      result.failure = err.what();
      result.event = BlowupEvent{t_next, std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::quiet_NaN()};
      break;
    }
    state.t = t_next;

    const auto& row = recorder.record(state);
    if (observer) observer(state);
    if (k % config.snapshot_stride == 0) result.snapshots.push_back(state);

    const double slope = std::abs(state.u[0]) / r0;
    if (!slope_warned && slopes.size() >= 8) {
      std::vector<double> scratch = slopes;
      auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
      std::nth_element(scratch.begin(), mid, scratch.end());
      if (*mid > 0.0 && slope > 10.0 * *mid) {
        std::ostringstream msg;
        msg << "near-origin slope " << slope << " exceeds 10x its running median "
            << *mid << " at t = " << state.t;
        result.warnings.push_back(msg.str());
        slope_warned = true;
      }
    }
    slopes.push_back(slope);

    if (row.sup_u_r >= threshold) {
      result.status = EvolveStatus::BlowupDetected;
      result.event = BlowupEvent{state.t, row.sup_u_r, row.sup_u_r_location};
      break;
    }
  }

  if (result.snapshots.back().t != state.t) result.snapshots.push_back(state);
  result.final_state = std::move(state);
  result.series = recorder.release();
  return result;
}

}  // namespace anlab
