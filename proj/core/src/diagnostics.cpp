#include "anlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "anlab/quadrature.hpp"

namespace anlab {
namespace {

constexpr double kTimeMatch = 1e-12;

bool same_time(double a, double b) {
  return std::abs(a - b) <= kTimeMatch * std::max(1.0, std::abs(a));
}

void require_time_ordered(std::span<const FieldState> snapshots) {
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    if (!(snapshots[k].t > snapshots[k - 1].t)) {
      throw std::invalid_argument("snapshots must be strictly increasing in t");
    }
  }
}

// Trapezoid rule for samples (t_k, f_k) restricted to [a, b]; the endpoints
// are interpolated linearly between neighbouring samples.
double integrate_in_time(std::span<const double> t, std::span<const double> f,
                         double a, double b) {
  if (t.empty() || a < t.front() - kTimeMatch ||
      b > t.back() + kTimeMatch) {
    throw CoverageError("snapshots do not cover the requested time interval");
  }
  if (b <= a) return 0.0;
  auto value_at = [&](double s) {
    auto it = std::lower_bound(t.begin(), t.end(), s);
    if (it == t.end()) return f.back();
    auto k = static_cast<std::size_t>(it - t.begin());
    if (k == 0 || same_time(t[k], s)) return f[k];
    const double frac = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return f[k - 1] + frac * (f[k] - f[k - 1]);
  };
  double total = 0.0;
  double s_prev = a;
  double f_prev = value_at(a);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] <= a || t[k] >= b) continue;
    total += 0.5 * (t[k] - s_prev) * (f[k] + f_prev);
    s_prev = t[k];
    f_prev = f[k];
  }
  total += 0.5 * (b - s_prev) * (value_at(b) + f_prev);
  return total;
}

std::vector<double> times_of(std::span<const FieldState> snapshots) {
  std::vector<double> t(snapshots.size());
  for (std::size_t k = 0; k < snapshots.size(); ++k) t[k] = snapshots[k].t;
  return t;
}

double mantel_density_from(const SliceFields& f, const RadialGrid& grid,
                           double t, ModelKind kind) {
  const double tau = std::abs(t);
  if (tau == 0.0) return 0.0;
  const double r = std::min(tau, grid.outer_radius());
  const double u = interpolate(f.u, grid, r, Parity::Odd);
  const double ut = interpolate(f.u_t, grid, r, Parity::Odd);
  const double ur = interpolate(f.u_r, grid, r, Parity::Even);
  const double s = std::sin(u);
  const double diff = ut - ur;
  double density = 0.5 * r * r * diff * diff + s * s;
  if (kind == ModelKind::AdkinsNappi) {
    const double w = winding_primitive(u);
    density += 0.5 * w * w / (r * r);
  }
  return density;
}

struct EnergyDensities {
  std::vector<double> kinetic;
  std::vector<double> gradient;
  std::vector<double> angular;
  std::vector<double> repulsive;
};

EnergyDensities energy_densities(const SliceFields& f) {
  const auto n = f.r.size();
  EnergyDensities d{std::vector<double>(n), std::vector<double>(n),
                    std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double r2 = f.r[j] * f.r[j];
    d.kinetic[j] = 0.5 * f.u_t[j] * f.u_t[j];
    d.gradient[j] = 0.5 * f.u_r[j] * f.u_r[j];
    d.angular[j] = f.sin_u[j] * f.sin_u[j] / r2;
    d.repulsive[j] = 0.5 * f.w[j] * f.w[j] / (r2 * r2);
  }
  return d;
}

EnergyReport energy_from(const EnergyDensities& d, const RadialGrid& grid,
                         double t, double r_lo, double r_hi) {
  EnergyReport report;
  report.t = t;
  report.r_max = r_hi;
  report.kinetic = integrate_r2(d.kinetic, grid, r_lo, r_hi);
  report.gradient = integrate_r2(d.gradient, grid, r_lo, r_hi);
  report.angular = integrate_r2(d.angular, grid, r_lo, r_hi);
  report.repulsive = integrate_r2(d.repulsive, grid, r_lo, r_hi);
  report.total =
      report.kinetic + report.gradient + report.angular + report.repulsive;
  return report;
}

NonconcentrationSplit split_from(const SliceFields& f,
                                 const EnergyDensities& d,
                                 const RadialGrid& grid, double tau) {
  NonconcentrationSplit out;
  if (!(tau > 0.0)) return out;
  const double r_hi = std::min(tau, grid.outer_radius());
  const auto n = f.r.size();
  std::vector<double> momentum(n);
  std::vector<double> minus(n);
  std::vector<double> plus(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = f.r[j] / tau;
    const double a = f.u_t[j] - f.u_r[j];
    const double b = f.u_t[j] + f.u_r[j];
    momentum[j] = f.r[j] * f.u_r[j] * f.u_t[j] / tau;
    minus[j] = 0.25 * (1.0 + rho) * a * a;
    plus[j] = 0.25 * (1.0 - rho) * b * b;
  }
  const EnergyReport e = energy_from(d, grid, 0.0, 0.0, r_hi);
  out.direct = e.total - integrate_r2(momentum, grid, 0.0, r_hi);
  out.terms = {integrate_r2(minus, grid, 0.0, r_hi),
               integrate_r2(plus, grid, 0.0, r_hi), e.angular, e.repulsive};
  out.decomposed = out.terms[0] + out.terms[1] + out.terms[2] + out.terms[3];
  return out;
}

double h2_from(std::span<const double> u, const SliceFields& f,
               const RadialGrid& grid, double tau) {
  if (!(tau > 0.0)) return 0.0;
  std::vector<double> density(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double w = winding_primitive(u[j]);
    const double r2 = f.r[j] * f.r[j];
    density[j] = w * w / (r2 * r2);
  }
  return integrate_r2(density, grid, 0.0, std::min(tau, grid.outer_radius()));
}

PointwiseEstimate pointwise_from(const SliceFields& f) {
  const auto n = f.r.size();
  PointwiseEstimate out{std::vector<double>(n), std::vector<double>(n), 0.0};
  constexpr double floor = std::numeric_limits<double>::epsilon();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = f.r[j];
    const double r2 = r * r;
    const double ut = f.u_t[j];
    const double ur = f.u_r[j];
    const double s = f.sin_u[j];
    const double sin2u = 2.0 * s * f.cos_u[j];
    const double w = f.w[j];
    const double combination = r * (ur * ur - ut * ut) + w * w / (r2 * r) -
                               2.0 * sin2u * ur -
                               2.0 * w * (2.0 * s * s) / r2 * ur;
    const double e =
        0.5 * (ut * ut + ur * ur) + s * s / r2 + 0.5 * w * w / (r2 * r2);
    const double m = ur * ut;
    out.lhs[j] = combination * combination;
    out.rhs[j] = std::max(r2 * (e - m) * (e + m), floor);
    out.ratio_sup = std::max(out.ratio_sup, out.lhs[j] / out.rhs[j]);
  }
  return out;
}

// P, Q and right-hand side of the five multiplier identities at one node.
struct IdentityTerms {
  double p;
  double q;
  double rhs;
};

IdentityTerms identity_terms(Identity which, double t, double r, double u,
                             double ut, double ur, double s, double c,
                             double w, bool repulsive) {
  const double r2 = r * r;
  const double kin = ut * ut + ur * ur;
  const double sin2 = s * s;
  const double w2 = w * w;
  switch (which) {
    case Identity::E1:
      return {0.5 * r2 * kin + sin2 + 0.5 * w2 / r2, r2 * ut * ur, 0.0};
    case Identity::E2:
      return {r2 * ut * ur, 0.5 * r2 * kin - sin2 - 0.5 * w2 / r2,
              r * (ur * ur - ut * ut) - w2 / (r2 * r)};
    case Identity::E3:
      return {r2 * r * ut * ur, 0.5 * r2 * r * kin - r * sin2 - 0.5 * w2 / r,
              0.5 * r2 * (ur * ur - 3.0 * ut * ut) + sin2 - 0.5 * w2 / r2};
    case Identity::E4: {
      double force = 2.0 * s * c;
      if (repulsive) force += w * (2.0 * sin2) / r2;
      return {r2 * u * ut, r2 * u * ur, r2 * (ut * ut - ur * ur) - u * force};
    }
    case Identity::E5: {
      const double density = 0.5 * r2 * kin + sin2 + 0.5 * w2 / r2;
      return {t * density, t * r2 * ut * ur, density};
    }
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

std::vector<double> radial_derivative(const FieldState& state) {
  const auto& u = state.u;
  const auto n = u.size();
  const double inv2h = 0.5 / state.grid.spacing();
  std::vector<double> ur(n);
  ur[0] = (u[1] + u[0]) * inv2h;
  for (std::size_t j = 1; j + 1 < n; ++j) ur[j] = (u[j + 1] - u[j - 1]) * inv2h;
  ur[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2h;
  return ur;
}

SliceFields make_slice_fields(const FieldState& state, ModelKind kind) {
  const auto n = state.grid.cells();
  SliceFields f;
  f.r = state.grid.nodes();
  f.u = state.u;
  f.u_t = state.v;
  f.u_r = radial_derivative(state);
  f.sin_u.resize(n);
  f.cos_u.resize(n);
  f.w.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    f.sin_u[j] = std::sin(state.u[j]);
    f.cos_u[j] = std::cos(state.u[j]);
    if (kind == ModelKind::AdkinsNappi) f.w[j] = winding_primitive(state.u[j]);
  }
  return f;
}

EnergyReport energy_slice(const FieldState& state, double r_max,
                          ModelKind kind) {
  if (!(r_max > 0.0) || r_max > state.grid.outer_radius() * (1.0 + 1e-12)) {
    throw std::invalid_argument("energy_slice needs 0 < r_max <= R");
  }
  const SliceFields f = make_slice_fields(state, kind);
  return energy_from(energy_densities(f), state.grid, state.t, 0.0, r_max);
}

DensityField density_field(const FieldState& state, ModelKind kind) {
  const SliceFields f = make_slice_fields(state, kind);
  const auto d = energy_densities(f);
  const auto n = f.r.size();
  DensityField out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.e[j] = d.kinetic[j] + d.gradient[j] + d.angular[j] + d.repulsive[j];
    out.m[j] = f.u_r[j] * f.u_t[j];
  }
  return out;
}

double mantel_flux_density(const FieldState& state, ModelKind kind) {
  return mantel_density_from(make_slice_fields(state, kind), state.grid,
                             state.t, kind);
}

double flux_cone(std::span<const FieldState> snapshots, double T, double S,
                 ModelKind kind) {
  if (!(T < S) || S > 0.0) {
    throw std::invalid_argument("flux_cone needs T < S <= 0");
  }
  require_time_ordered(snapshots);
  const auto t = times_of(snapshots);
  std::vector<double> f(snapshots.size());
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    f[k] = mantel_flux_density(snapshots[k], kind);
  }
  return integrate_in_time(t, f, T, S);
}

IdentityResidual identity_residual(std::span<const FieldState> snapshots,
                                   Identity which, ModelKind kind) {
  if (snapshots.size() != 3) {
    throw std::invalid_argument("identity_residual needs three snapshots");
  }
  const double dt0 = snapshots[1].t - snapshots[0].t;
  const double dt1 = snapshots[2].t - snapshots[1].t;
  if (!(dt0 > 0.0) || std::abs(dt1 - dt0) > 1e-9 * dt0) {
    throw std::invalid_argument("snapshots must be equally spaced in time");
  }
  const auto& grid = snapshots[1].grid;
  if (!(snapshots[0].grid == grid) || !(snapshots[2].grid == grid)) {
    throw std::invalid_argument("snapshots must share a grid");
  }

  const bool repulsive = kind == ModelKind::AdkinsNappi;
  std::array<SliceFields, 3> f{make_slice_fields(snapshots[0], kind),
                               make_slice_fields(snapshots[1], kind),
                               make_slice_fields(snapshots[2], kind)};
  auto terms = [&](std::size_t k, std::size_t j) {
    const auto& s = f[k];
    return identity_terms(which, snapshots[k].t, s.r[j], s.u[j], s.u_t[j],
                          s.u_r[j], s.sin_u[j], s.cos_u[j], s.w[j], repulsive);
  };

  const auto n = grid.cells();
  const double h = grid.spacing();
  const double two_dt = snapshots[2].t - snapshots[0].t;
  IdentityResidual out;
  double sum = 0.0;
  for (std::size_t j = 2; j + 3 <= n; ++j) {
    const double r = grid.node(j);
    if (r < 2.0 * h || r > grid.outer_radius() - 2.0 * h) continue;
    const double dp = (terms(2, j).p - terms(0, j).p) / two_dt;
    const double dq = (terms(1, j + 1).q - terms(1, j - 1).q) / (2.0 * h);
    const double res = dp - dq - terms(1, j).rhs;
    out.r.push_back(r);
    out.residual.push_back(res);
    sum += res * res * h;
  }
  out.norm = std::sqrt(sum);
  return out;
}

double cone_integral(std::span<const FieldState> snapshots, double T,
                     const SliceDensity& density) {
  require_time_ordered(snapshots);
  if (snapshots.empty() || !(T < 0.0)) {
    throw CoverageError("cone integral needs T < 0 and snapshots");
  }
  std::vector<double> t;
  std::vector<double> values;
  for (const auto& s : snapshots) {
    if (s.t >= 0.0) break;
    const double tau = std::min(-s.t, s.grid.outer_radius());
    t.push_back(s.t);
    values.push_back(integrate_r2(density(s), s.grid, 0.0, tau));
  }
  if (t.empty()) throw CoverageError("no snapshot before t = 0");
  return integrate_in_time(t, values, T, t.back());
}

ConeFunctionals cone_functionals(std::span<const FieldState> snapshots,
                                 double T, double lambda, ModelKind kind) {
  require_time_ordered(snapshots);
  if (!(T < 0.0)) throw std::invalid_argument("cone functionals need T < 0");
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (snapshots.empty() || snapshots.front().t > T + kTimeMatch) {
    throw CoverageError("snapshots start after the requested base time");
  }

  std::vector<double> t;
  std::vector<double> k3;
  std::vector<double> k4;
  std::vector<double> k5;
  for (const auto& s : snapshots) {
    if (s.t >= 0.0) break;
    const SliceFields f = make_slice_fields(s, kind);
    const auto d = energy_densities(f);
    const auto n = f.r.size();
    std::vector<double> d3(n);
    std::vector<double> d4(n);
    std::vector<double> d5(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double ut2 = f.u_t[j] * f.u_t[j];
      const double ur2 = f.u_r[j] * f.u_r[j];
      const double r2 = f.r[j] * f.r[j];
      const double rep = d.repulsive[j];
      d3[j] = 0.5 * (3.0 * ut2 - ur2) + rep;
      d4[j] = ur2 - ut2;
      if (kind == ModelKind::AdkinsNappi) {
        d4[j] += f.u[j] * f.w[j] * (2.0 * f.sin_u[j] * f.sin_u[j]) / (r2 * r2);
      }
      d5[j] = -0.5 * (ut2 + ur2) - rep;
    }
    const double tau = std::min(-s.t, s.grid.outer_radius());
    t.push_back(s.t);
    k3.push_back(integrate_r2(d3, s.grid, 0.0, tau));
    k4.push_back(integrate_r2(d4, s.grid, 0.0, tau));
    k5.push_back(integrate_r2(d5, s.grid, 0.0, tau));
  }
  if (t.empty()) throw CoverageError("no snapshot before t = 0");
  const double t_last = t.back();
  if (T > t_last + kTimeMatch) {
    throw CoverageError("base time lies after the last snapshot");
  }

  // Base quantities over r <= |T|, interpolated linearly in time at T.
  struct Base {
    double energy;
    double momentum;
    double h2;
    double annular;
  };
  const double tau_base = -T;
  auto base_on = [&](const FieldState& s) {
    const auto& grid = s.grid;
    const double r_hi = std::min(tau_base, grid.outer_radius());
    const SliceFields f = make_slice_fields(s, kind);
    const auto d = energy_densities(f);
    const auto n = f.r.size();
    std::vector<double> mom(n);
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) {
      mom[j] = f.r[j] * f.u_r[j] * f.u_t[j];
      e[j] = d.kinetic[j] + d.gradient[j] + d.angular[j] + d.repulsive[j];
    }
    return Base{energy_from(d, grid, s.t, 0.0, r_hi).total,
                integrate_r2(mom, grid, 0.0, r_hi), h2_from(s.u, f, grid, r_hi),
                integrate_r2(e, grid, lambda * r_hi, r_hi)};
  };
  auto it = std::lower_bound(t.begin(), t.end(), T - kTimeMatch);
  const auto k = static_cast<std::size_t>(it - t.begin());
  Base base = base_on(snapshots[k]);
  if (!same_time(t[k], T) && k > 0) {
    const Base lower = base_on(snapshots[k - 1]);
    const double frac = (T - t[k - 1]) / (t[k] - t[k - 1]);
    auto mix = [frac](double a, double b) { return a + frac * (b - a); };
    base = {mix(lower.energy, base.energy), mix(lower.momentum, base.momentum),
            mix(lower.h2, base.h2), mix(lower.annular, base.annular)};
  }

  ConeFunctionals out;
  out.T = T;
  out.t_last = t_last;
  const double m_base = base.momentum / tau_base;
  out.ie3 = integrate_in_time(t, k3, T, t_last) / tau_base - m_base;
  out.ie4 = integrate_in_time(t, k4, T, t_last) / tau_base;
  out.ie5 = integrate_in_time(t, k5, T, t_last) / tau_base + base.energy;
  out.eq_non = base.energy - m_base;
  out.h2 = base.h2;
  out.annular = base.annular;
  return out;
}

NonconcentrationSplit nonconcentration_split(const FieldState& state,
                                             ModelKind kind) {
  if (!(state.t < 0.0)) {
    throw std::invalid_argument("nonconcentration split needs t < 0");
  }
  const SliceFields f = make_slice_fields(state, kind);
  return split_from(f, energy_densities(f), state.grid, -state.t);
}

double h2_functional(const FieldState& state) {
  if (!(state.t < 0.0)) return 0.0;
  const SliceFields f = make_slice_fields(state, ModelKind::WaveMap);
  return h2_from(state.u, f, state.grid, -state.t);
}

double annular_energy(const FieldState& state, double lambda, ModelKind kind) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(state.t < 0.0)) return 0.0;
  const auto density = density_field(state, kind);
  const double tau = std::min(-state.t, state.grid.outer_radius());
  return integrate_r2(density.e, state.grid, lambda * tau, tau);
}

PointwiseEstimate pointwise_estimate_check(const FieldState& state,
                                           ModelKind kind) {
  return pointwise_from(make_slice_fields(state, kind));
}

std::vector<MantelSample> boundary_vanishing_check(
    std::span<const FieldState> snapshots) {
  require_time_ordered(snapshots);
  std::vector<MantelSample> out;
  for (const auto& s : snapshots) {
    if (s.t > 0.0) break;
    const double tau = -s.t;
    if (tau > s.grid.outer_radius()) {
      throw CoverageError("mantel point lies outside the grid");
    }
    const double u = interpolate(s.u, s.grid, tau, Parity::Odd);
    out.push_back({s.t, u, potential_I(u)});
  }
  if (out.empty()) throw CoverageError("no snapshot on the cone mantel");
  return out;
}

void write_csv(std::ostream& out, const DiagnosticSeries& series) {
  out << "t,dt,E_total,E_cone,E_kin,E_grad,E_ang,E_rep,flux_cum,sup_u,sup_ur,"
         "Q,h2,eq_non,annular_lambda,els_ratio\n";
  const auto old_precision = out.precision(17);
  for (const auto& row : series.rows) {
    out << row.t << ',' << row.dt << ',' << row.energy_total << ','
        << row.energy_cone << ',' << row.kinetic << ',' << row.gradient << ','
        << row.angular << ',' << row.repulsive << ',' << row.flux_cumulative
        << ',' << row.sup_u << ',' << row.sup_u_r << ',' << row.winding << ','
        << row.h2 << ',' << row.eq_non << ',' << row.annular << ','
        << row.els_ratio << '\n';
  }
  out.precision(old_precision);
}

SeriesRecorder::SeriesRecorder(ModelKind kind, double lambda,
                               double flux_offset)
    : kind_{kind}, flux_offset_{flux_offset} {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  series_.lambda = lambda;
}

const DiagnosticRow& SeriesRecorder::record(const FieldState& state) {
  const auto& grid = state.grid;
  const SliceFields f = make_slice_fields(state, kind_);
  const auto d = energy_densities(f);

  DiagnosticRow row;
  row.t = state.t;
  row.dt = has_previous_ ? state.t - previous_t_ : 0.0;

  const EnergyReport full =
      energy_from(d, grid, state.t, 0.0, grid.outer_radius());
  row.energy_total = full.total;
  row.kinetic = full.kinetic;
  row.gradient = full.gradient;
  row.angular = full.angular;
  row.repulsive = full.repulsive;

  const double tau = -state.t;
  if (tau > 0.0) {
    const double r_cone = std::min(tau, grid.outer_radius());
    row.energy_cone = energy_from(d, grid, state.t, 0.0, r_cone).total;
    row.eq_non = split_from(f, d, grid, tau).direct;
    row.h2 = h2_from(state.u, f, grid, tau);
    std::vector<double> e(f.r.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
      e[j] = d.kinetic[j] + d.gradient[j] + d.angular[j] + d.repulsive[j];
    }
    row.annular = integrate_r2(e, grid, series_.lambda * r_cone, r_cone);
  }

  const double mantel = mantel_density_from(f, grid, state.t, kind_);
  if (has_previous_) {
    flux_offset_ += 0.5 * (state.t - previous_t_) * (mantel + previous_mantel_);
  }
  row.flux_cumulative = flux_offset_;

  for (std::size_t j = 0; j < f.r.size(); ++j) {
    row.sup_u = std::max(row.sup_u, std::abs(f.u[j]));
    if (std::abs(f.u_r[j]) > row.sup_u_r) {
      row.sup_u_r = std::abs(f.u_r[j]);
      row.sup_u_r_location = f.r[j];
    }
  }
  row.winding = winding_number(state);
  row.els_ratio = pointwise_from(f).ratio_sup;

  has_previous_ = true;
  previous_t_ = state.t;
  previous_mantel_ = mantel;
  series_.rows.push_back(row);
  return series_.rows.back();
}

}  // namespace anlab
