#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "anlab/diagnostics.hpp"
#include "anlab/quadrature.hpp"
#include "support.hpp"

using namespace anlab;
using anlab::testing::turok_spergel_state;
using std::numbers::pi;

namespace {

std::vector<FieldState> exact_snapshots(const RadialGrid& grid, double t0,
                                        double t1, std::size_t count) {
  std::vector<FieldState> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(turok_spergel_state(grid, t));
  }
  return out;
}

FieldState random_state(std::mt19937_64& rng, const RadialGrid& grid, double t) {
  std::uniform_real_distribution<double> amp{-3.0, 3.0};
  std::uniform_real_distribution<double> freq{0.5, 6.0};
  FieldState s = zero_state(grid, t);
  const double a = amp(rng), b = amp(rng), k1 = freq(rng), k2 = freq(rng);
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double r = grid.node(j);
    s.u[j] = a * std::sin(k1 * r) + 0.3 * b * r;
    s.v[j] = b * std::cos(k2 * r) * r;
  }
  return s;
}

}  // namespace

TEST_CASE("slice energy") {
  const auto grid = make_grid(2.5, 4096);

  SUBCASE("zero field") {
    const auto e = energy_slice(zero_state(grid, -1.0), 1.0, ModelKind::AdkinsNappi);
    CHECK(e.total == 0.0);
    CHECK(e.kinetic == 0.0);
    CHECK(e.repulsive == 0.0);
  }
  SUBCASE("linear ramp has the exact gradient energy") {
    const double R = 2.5;
    FieldState s = zero_state(grid, 0.0);
    for (std::size_t j = 0; j < grid.cells(); ++j) s.u[j] = pi * grid.node(j) / R;
    const auto e = energy_slice(s, R, ModelKind::WaveMap);
    CHECK(e.gradient == doctest::Approx((pi / R) * (pi / R) * R * R * R / 6).epsilon(1e-13));
  }
  SUBCASE("Turok-Spergel cone energies against high-precision quadrature") {
    const auto s = turok_spergel_state(grid, -1.0);
    const auto wm = energy_slice(s, 1.0, ModelKind::WaveMap);
    const auto an = energy_slice(s, 1.0, ModelKind::AdkinsNappi);
    CHECK(wm.total == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(an.total == doctest::Approx(1.4923318648958877).epsilon(1e-6));
    CHECK(an.total == doctest::Approx(an.kinetic + an.gradient + an.angular + an.repulsive).epsilon(1e-15));
    CHECK(wm.repulsive == 0.0);
    for (double c : {an.kinetic, an.gradient, an.angular, an.repulsive}) CHECK(c >= 0.0);
  }
  CHECK_THROWS_AS(energy_slice(zero_state(grid, 0.0), 3.0, ModelKind::WaveMap), std::invalid_argument);
  CHECK_THROWS_AS(energy_slice(zero_state(grid, 0.0), 0.0, ModelKind::WaveMap), std::invalid_argument);
}

TEST_CASE("momentum density is bounded by the energy density") {
  std::mt19937_64 rng{11};
  const auto grid = make_grid(2.0, 256);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(rng, grid, -0.5);
    for (auto kind : {ModelKind::WaveMap, ModelKind::AdkinsNappi}) {
      const auto d = density_field(s, kind);
      for (std::size_t j = 0; j < d.e.size(); ++j) CHECK(std::abs(d.m[j]) <= d.e[j]);
    }
  }
}

TEST_CASE("mantel flux") {
  const auto grid = make_grid(2.5, 4096);
  CHECK(mantel_flux_density(zero_state(grid, -0.5), ModelKind::AdkinsNappi) == 0.0);
  // For the wave map the Turok-Spergel mantel density is identically 1.
  for (double t : {-1.0, -0.5, -0.1}) {
    CHECK(mantel_flux_density(turok_spergel_state(grid, t), ModelKind::WaveMap) ==
          doctest::Approx(1.0).epsilon(1e-5));
  }
  const auto snaps = exact_snapshots(grid, -1.0, -0.5, 501);
  const double flux = flux_cone(snaps, -1.0, -0.5, ModelKind::WaveMap);
  const double e_t = energy_slice(snaps.front(), 1.0, ModelKind::WaveMap).total;
  const double e_s = energy_slice(snaps.back(), 0.5, ModelKind::WaveMap).total;
  CHECK(flux == doctest::Approx(e_t - e_s).epsilon(1e-3));
  CHECK(flux == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_THROWS_AS(flux_cone(snaps, -1.2, -0.5, ModelKind::WaveMap), CoverageError);
  CHECK_THROWS_AS(flux_cone(snaps, -0.5, -1.0, ModelKind::WaveMap), std::invalid_argument);
}

TEST_CASE("identity residuals") {
  const Identity all[] = {Identity::E1, Identity::E2, Identity::E3, Identity::E4, Identity::E5};
  SUBCASE("zero field") {
    const auto grid = make_grid(1.0, 64);
    std::vector<FieldState> snaps{zero_state(grid, -0.6), zero_state(grid, -0.5), zero_state(grid, -0.4)};
    for (auto id : all) CHECK(identity_residual(snaps, id, ModelKind::AdkinsNappi).norm == 0.0);
  }
  SUBCASE("exact wave map samples converge at second order") {
    auto norm = [](std::size_t n, Identity id) {
      const auto grid = make_grid(2.5, n);
      const double dt = 0.5 * grid.spacing();
      std::vector<FieldState> snaps;
      for (int k = -1; k <= 1; ++k) snaps.push_back(turok_spergel_state(grid, -0.5 + k * dt));
      return identity_residual(snaps, id, ModelKind::WaveMap).norm;
    };
    for (auto id : all) {
      const double ratio = norm(512, id) / norm(1024, id);
      CHECK(ratio == doctest::Approx(4.0).epsilon(0.25));
    }
  }
  SUBCASE("unequal spacing is rejected") {
    const auto grid = make_grid(1.0, 64);
    std::vector<FieldState> snaps{zero_state(grid, -0.6), zero_state(grid, -0.5), zero_state(grid, -0.3)};
    CHECK_THROWS_AS(identity_residual(snaps, Identity::E1, ModelKind::WaveMap), std::invalid_argument);
  }
}

TEST_CASE("nonconcentration decomposition is an exact identity") {
  std::mt19937_64 rng{99};
  const auto grid = make_grid(2.5, 512);
  std::uniform_real_distribution<double> time{-2.0, -0.05};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_state(rng, grid, time(rng));
    for (auto kind : {ModelKind::WaveMap, ModelKind::AdkinsNappi}) {
      const auto split = nonconcentration_split(s, kind);
      CHECK(split.decomposed == doctest::Approx(split.direct).epsilon(1e-12));
      for (double term : split.terms) CHECK(term >= 0.0);
    }
  }
}

TEST_CASE("cone functionals") {
  const auto grid = make_grid(2.5, 1024);
  SUBCASE("zero field") {
    std::vector<FieldState> snaps{zero_state(grid, -1.0), zero_state(grid, -0.5), zero_state(grid, -0.1)};
    const auto c = cone_functionals(snaps, -0.5, 0.5, ModelKind::AdkinsNappi);
    CHECK(c.ie3 == 0.0);
    CHECK(c.ie4 == 0.0);
    CHECK(c.ie5 == 0.0);
    CHECK(c.eq_non == 0.0);
    CHECK(c.h2 == 0.0);
    CHECK(c.annular == 0.0);
    CHECK(c.t_last == -0.1);
  }
  SUBCASE("Turok-Spergel base at T = -0.5") {
    const auto snaps = exact_snapshots(grid, -1.0, -0.1, 91);
    const auto c = cone_functionals(snaps, -0.5, 0.5, ModelKind::WaveMap);
    const auto split = nonconcentration_split(turok_spergel_state(grid, -0.5), ModelKind::WaveMap);
    CHECK(c.eq_non == doctest::Approx(split.decomposed).epsilon(1e-10));
    CHECK(c.h2 == doctest::Approx(1.9693274595835506).epsilon(1e-4));
    CHECK(c.t_last == doctest::Approx(-0.1));
    CHECK_THROWS_AS(cone_functionals(snaps, -1.5, 0.5, ModelKind::WaveMap), CoverageError);
  }
  SUBCASE("surrogate cone and base integrals of f = 1 shrink linearly in |T|") {
    const auto snaps = exact_snapshots(grid, -1.0, -1e-6, 1001);
    auto density = [](const FieldState& s) {
      std::vector<double> f(s.grid.cells());
      for (std::size_t j = 0; j < f.size(); ++j) f[j] = 1.0 / (s.grid.node(j) * s.grid.node(j));
      return f;
    };
    for (double T : {-0.8, -0.4, -0.2}) {
      const double cone = cone_integral(snaps, T, density) / std::abs(T);
      const double base = integrate_r2(density(snaps.front()), grid, 0.0, std::abs(T));
      // 1/r^2 is interpolated linearly, so the first cells carry an O(h) error.
      CHECK(cone == doctest::Approx(std::abs(T) / 2).epsilon(2e-2));
      CHECK(base == doctest::Approx(std::abs(T)).epsilon(2e-2));
    }
  }
}

TEST_CASE("h2 functional") {
  const auto grid = make_grid(2.5, 4096);
  CHECK(h2_functional(zero_state(grid, -0.5)) == 0.0);
  CHECK(h2_functional(turok_spergel_state(grid, -0.5)) ==
        doctest::Approx(1.9693274595835506).epsilon(1e-5));
}

TEST_CASE("pointwise estimate") {
  const auto grid = make_grid(2.5, 8192);
  const auto zero = pointwise_estimate_check(zero_state(grid, -1.0), ModelKind::AdkinsNappi);
  CHECK(zero.ratio_sup == 0.0);
  auto kink = [&](double a) {
    FieldState s = zero_state(grid, -1.0);
    for (std::size_t j = 0; j < grid.cells(); ++j) s.u[j] = std::min(a * grid.node(j), pi / 2);
    return pointwise_estimate_check(s, ModelKind::AdkinsNappi).ratio_sup;
  };
  CHECK(kink(100.0) > 10.0 * kink(1.0));
  double bound = 0.0;
  for (double T = 0.1; T <= 1.0 + 1e-12; T += 0.1) {
    const auto s = turok_spergel_state(grid, -T);
    bound = std::max(bound, pointwise_estimate_check(s, ModelKind::WaveMap).ratio_sup);
  }
  CHECK(bound < 5.0);
}

TEST_CASE("mantel values of Turok-Spergel stay at pi/2") {
  const auto grid = make_grid(2.5, 2048);
  const auto snaps = exact_snapshots(grid, -1.0, -0.01, 34);
  const auto samples = boundary_vanishing_check(snaps);
  REQUIRE(samples.size() == snaps.size());
  const double h = grid.spacing();
  for (const auto& s : samples) {
    const double tol = 2.0 * (h / s.t) * (h / s.t);
    CHECK(s.u == doctest::Approx(pi / 2).epsilon(tol));
    CHECK(s.potential == doctest::Approx(potential_I(pi / 2)).epsilon(2.0 * tol));
  }
  const auto zero = boundary_vanishing_check(std::vector<FieldState>{zero_state(grid, -0.5)});
  CHECK(zero.front().u == 0.0);
}

TEST_CASE("series recorder and CSV") {
  const auto grid = make_grid(2.5, 64);
  SeriesRecorder recorder{ModelKind::AdkinsNappi, 0.5};
  recorder.record(zero_state(grid, -1.0));
  recorder.record(zero_state(grid, -0.9));
  const auto& series = recorder.series();
  REQUIRE(series.rows.size() == 2);
  CHECK(series.rows[1].dt == doctest::Approx(0.1));
  std::ostringstream out;
  write_csv(out, series);
  std::istringstream in{out.str()};
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,dt,E_total,E_cone,E_kin,E_grad,E_ang,E_rep,flux_cum,sup_u,sup_ur,Q,h2,eq_non,annular_lambda,els_ratio");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}
