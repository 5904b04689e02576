#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "anlab/diagnostics.hpp"
#include "anlab/field_state.hpp"
#include "anlab/model.hpp"

namespace anlab {

/// Ghost value extrapolated through a fixed value at the face r = R.
struct DirichletConstant {
  double value = std::numbers::pi;
};

/// Ghost value extrapolated through the Turok-Spergel solution at r = R.
struct DirichletExact {
  double blowup_time = 0.0;
};

/// Sommerfeld condition u_t + u_r + (u - pi)/r = 0 at the outer face.
struct Outgoing {};

using OuterBoundary = std::variant<DirichletConstant, DirichletExact, Outgoing>;

struct SolverConfig {
  ModelKind model = ModelKind::AdkinsNappi;
  RadialGrid grid = make_grid(2.5, 1024);
  double cfl = 0.5;
  double t_start = -1.0;
  double t_end = 0.0;
  OuterBoundary outer_bc = DirichletConstant{};
  /// Absolute threshold on sup |u_r|; a value <= 0 selects 1e3 times the
  /// initial sup.
  double blowup_gradient_threshold = 0.0;
  std::size_t snapshot_stride = 100;
  /// Inner radius fraction of the annular energy column.
  double lambda = 0.5;

  double time_step() const noexcept { return cfl * grid.spacing(); }

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct BlowupEvent {
  double t_detect = 0.0;
  double sup_gradient = 0.0;
  double location = 0.0;
};

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// du = v, dv = conservative radial Laplacian of u minus N(u, r).
void rhs(const FieldState& state, ModelKind kind, const OuterBoundary& bc,
         std::span<double> du, std::span<double> dv);

struct FieldDerivative {
  std::vector<double> du;
  std::vector<double> dv;
};

FieldDerivative rhs(const FieldState& state, ModelKind kind,
                    const OuterBoundary& bc);

/// Classical RK4 with reusable stage storage.
class Stepper {
 public:
  Stepper(ModelKind kind, OuterBoundary bc, const RadialGrid& grid);

  /// Advances in place; throws InstabilityError (leaving `state` untouched)
  /// if the new state is not finite.
  void advance(FieldState& state, double dt);

 private:
  ModelKind kind_;
  OuterBoundary bc_;
  FieldState stage_;
  std::vector<double> ku_[4];
  std::vector<double> kv_[4];
  std::vector<double> next_u_;
  std::vector<double> next_v_;
};

FieldState step(const FieldState& state, double dt, ModelKind kind,
                const OuterBoundary& bc);

enum class EvolveStatus { Completed, BlowupDetected, Unstable };

std::string_view to_string(EvolveStatus status) noexcept;

struct EvolveResult {
  EvolveStatus status = EvolveStatus::Completed;
  DiagnosticSeries series;
  std::vector<FieldState> snapshots;
  std::optional<BlowupEvent> event;
  /// Last finite state reached (the state that tripped a blowup event, or
  /// the state before a non-finite step).
  FieldState final_state;
  std::string failure;
  std::vector<std::string> warnings;
};

using StepObserver = std::function<void(const FieldState&)>;

/// Steps with dt = cfl h from data.t to t_end, shortening the last step.
/// Step k lands on t_start + k dt, so a run resumed from a state written at
/// a step boundary reproduces the uninterrupted run exactly. The observer
/// sees every accepted state, starting with `data`.
EvolveResult evolve(const SolverConfig& config, FieldState data,
                    double flux_offset = 0.0,
                    const StepObserver& observer = {});

}  // namespace anlab
