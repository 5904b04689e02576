#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "anlab/field_state.hpp"
#include "anlab/model.hpp"

// Every functional here integrates against the r^2 weight of the reduced
// action: a density written with 1/r^2 or 1/r^4 factors is multiplied by r^2
// before integration, exactly once. Cone integrals over K_T^S use the slices
// r <= |t| of each snapshot and the trapezoid rule in t.

namespace anlab {

/// Raised when the snapshots handed to a cone or mantel functional do not
/// span the requested time interval.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Centered radial derivative. The inner ghost is the odd reflection
/// u_{-1} = -u_0; the outermost node uses a second-order one-sided stencil.
std::vector<double> radial_derivative(const FieldState& state);

/// Per-node quantities shared by all slice functionals.
struct SliceFields {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> u_t;
  std::vector<double> u_r;
  std::vector<double> sin_u;
  std::vector<double> cos_u;
  std::vector<double> w;  ///< u - sin u cos u, zero for the wave map
};

SliceFields make_slice_fields(const FieldState& state, ModelKind kind);

struct EnergyReport {
  double t = 0.0;
  double r_max = 0.0;
  double total = 0.0;
  double kinetic = 0.0;
  double gradient = 0.0;
  double angular = 0.0;
  double repulsive = 0.0;
};

/// Energy of the ball r <= r_max. For the wave map the repulsive component
/// is identically zero. Throws std::invalid_argument unless 0 < r_max <= R.
EnergyReport energy_slice(const FieldState& state, double r_max,
                          ModelKind kind);

/// e = (u_t^2 + u_r^2)/2 + sin^2 u / r^2 + w^2 / (2 r^4), m = u_r u_t.
struct DensityField {
  std::vector<double> e;
  std::vector<double> m;
};

DensityField density_field(const FieldState& state, ModelKind kind);

/// r^2 [ (u_t - u_r)^2 / 2 + sin^2 u / r^2 + w^2 / (2 r^4) ] at r = |t|.
/// The mantel line element sqrt(2) dt cancels the 1/sqrt(2) prefactor, so
/// this is the integrand against dt.
double mantel_flux_density(const FieldState& state, ModelKind kind);

/// F(T, S) from time-ordered snapshots covering [T, S], T < S <= 0.
double flux_cone(std::span<const FieldState> snapshots, double T, double S,
                 ModelKind kind);

enum class Identity { E1, E2, E3, E4, E5 };

struct IdentityResidual {
  std::vector<double> r;
  std::vector<double> residual;
  double norm = 0.0;  ///< L2 over r in [2h, R - 2h]
};

/// d_t P - d_r Q - RHS for the multiplier identity `which`, evaluated on the
/// middle of three equally spaced snapshots. Wave-map variants drop every
/// term containing u - sin u cos u.
IdentityResidual identity_residual(std::span<const FieldState> snapshots,
                                   Identity which, ModelKind kind);

struct ConeFunctionals {
  double T = 0.0;
  double t_last = 0.0;  ///< upper end of the truncated cone
  double ie3 = 0.0;
  double ie4 = 0.0;
  double ie5 = 0.0;
  double eq_non = 0.0;
  double h2 = 0.0;
  double annular = 0.0;
};

/// Cone functionals over K_T^{t_last}, t_last being the last snapshot time
/// (which must be < 0). The base B_T is interpolated linearly in time when T
/// falls between snapshots.
ConeFunctionals cone_functionals(std::span<const FieldState> snapshots,
                                 double T, double lambda, ModelKind kind);

/// int_{K_T^{t_last}} f r^2 dr dt for a density f produced per snapshot.
using SliceDensity = std::function<std::vector<double>(const FieldState&)>;
double cone_integral(std::span<const FieldState> snapshots, double T,
                     const SliceDensity& density);

/// E(T) - (1/|T|) int_{B_T} r u_r u_t, evaluated at T = state.t both
/// directly and as the sum of the four nonnegative integrals
///   (1 + r/|T|)(u_t - u_r)^2 / 4,  (1 - r/|T|)(u_t + u_r)^2 / 4,
///   sin^2 u / r^2,  w^2 / (2 r^4).
struct NonconcentrationSplit {
  double direct = 0.0;
  double decomposed = 0.0;
  std::array<double, 4> terms{};
};

NonconcentrationSplit nonconcentration_split(const FieldState& state,
                                             ModelKind kind);

/// int_{B_T} w^2 / r^4 at T = state.t (independent of the model kind).
double h2_functional(const FieldState& state);

/// int over lambda|t| <= r <= |t| of e.
double annular_energy(const FieldState& state, double lambda, ModelKind kind);

struct PointwiseEstimate {
  std::vector<double> lhs;
  std::vector<double> rhs;
  double ratio_sup = 0.0;
};

/// lhs = ((r^2 m)_t - (r^2 e)_r)^2 from its closed form, rhs = r^2 (e-m)(e+m)
/// floored at machine epsilon; ratio_sup = max lhs / rhs.
PointwiseEstimate pointwise_estimate_check(const FieldState& state,
                                           ModelKind kind);

struct MantelSample {
  double t = 0.0;
  double u = 0.0;
  double potential = 0.0;  ///< I(u(t, |t|))
};

std::vector<MantelSample> boundary_vanishing_check(
    std::span<const FieldState> snapshots);

/// One row per recorded step; see write_csv for the column order.
struct DiagnosticRow {
  double t = 0.0;
  double dt = 0.0;
  double energy_total = 0.0;
  double energy_cone = 0.0;
  double kinetic = 0.0;
  double gradient = 0.0;
  double angular = 0.0;
  double repulsive = 0.0;
  double flux_cumulative = 0.0;
  double sup_u = 0.0;
  double sup_u_r = 0.0;
  double sup_u_r_location = 0.0;
  double winding = 0.0;
  double h2 = 0.0;
  double eq_non = 0.0;
  double annular = 0.0;
  double els_ratio = 0.0;
};

struct DiagnosticSeries {
  double lambda = 0.5;
  std::vector<DiagnosticRow> rows;
};

/// Header "t,dt,E_total,E_cone,E_kin,E_grad,E_ang,E_rep,flux_cum,sup_u,
/// sup_ur,Q,h2,eq_non,annular_lambda,els_ratio", 17 significant digits.
void write_csv(std::ostream& out, const DiagnosticSeries& series);

/// Builds a DiagnosticSeries one state at a time; accumulates the mantel
/// flux with the trapezoid rule between consecutive records.
class SeriesRecorder {
 public:
  SeriesRecorder(ModelKind kind, double lambda, double flux_offset = 0.0);

  const DiagnosticRow& record(const FieldState& state);

  const DiagnosticSeries& series() const noexcept { return series_; }
  DiagnosticSeries release() noexcept { return std::move(series_); }

 private:
  ModelKind kind_;
  DiagnosticSeries series_;
  double flux_offset_;
  bool has_previous_ = false;
  double previous_t_ = 0.0;
  double previous_mantel_ = 0.0;
};

}  // namespace anlab
