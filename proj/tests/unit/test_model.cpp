#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "anlab/field_state.hpp"
#include "anlab/model.hpp"
#include "support.hpp"

using namespace anlab;
using std::numbers::pi;

TEST_CASE("nonlinearity at special points") {
  CHECK(nonlinearity(0.0, 0.5, ModelKind::WaveMap) == 0.0);
  CHECK(nonlinearity(0.0, 0.5, ModelKind::AdkinsNappi) == 0.0);
  CHECK(nonlinearity(pi / 2, 1.0, ModelKind::WaveMap) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nonlinearity(pi / 2, 1.0, ModelKind::AdkinsNappi) == doctest::Approx(pi).epsilon(1e-14));
  CHECK_THROWS_AS(nonlinearity(1.0, 0.0, ModelKind::WaveMap), std::domain_error);
  CHECK_THROWS_AS(nonlinearity(1.0, -1.0, ModelKind::AdkinsNappi), std::domain_error);
}

TEST_CASE("repulsive term is the model difference and vanishes near the origin") {
  for (double u : {-2.0, 0.3, 1.0, 3.0}) {
    const double r = 0.7;
    CHECK(nonlinearity(u, r, ModelKind::AdkinsNappi) -
              nonlinearity(u, r, ModelKind::WaveMap) ==
          doctest::Approx(repulsive_term(u, r)).epsilon(1e-13));
  }
  for (double a : {0.1, 1.0, 10.0}) {
    // Leading behaviour (4/3) a^5 r.
    for (double r = 1e-3; r > 1e-9; r /= 10.0) {
      CHECK(repulsive_term(a * r, r) ==
            doctest::Approx(4.0 / 3.0 * std::pow(a, 5) * r).epsilon(1e-4 + 2 * a * a * r * r));
    }
  }
}

TEST_CASE("winding primitive is accurate across the series cutoff") {
  // Long-double reference away from the cancellation region.
  for (double u : {0.5000001, 0.7, 1.3, 2.0}) {
    const long double x = u;
    const long double ref = x - std::sin(x) * std::cos(x);
    CHECK(winding_primitive(u) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
  }
  // Near zero the primitive is (2/3) u^3 (1 - (2/5) u^2 + ...).
  for (double u : {1e-8, 1e-4, 1e-2}) {
    const double series = 2.0 / 3.0 * u * u * u * (1.0 - 0.4 * u * u);
    CHECK(winding_primitive(u) == doctest::Approx(series).epsilon(1e-6 * u * u + 1e-15));
  }
  CHECK(winding_primitive(-0.3) == -winding_primitive(0.3));
}

TEST_CASE("potential I closed form and bounds") {
  CHECK(potential_I(0.0) == 0.0);
  CHECK(potential_I(pi) == doctest::Approx(pi * pi / 2).epsilon(1e-15));
  CHECK(potential_I(pi / 2) == doctest::Approx((pi * pi / 4 - 1.0) / 2).epsilon(1e-15));
  std::mt19937_64 rng{7};
  std::uniform_real_distribution<double> dist{-50.0, 50.0};
  for (int i = 0; i < 100000; ++i) {
    const double z = dist(rng);
    if (z == 0.0) continue;
    CHECK_MESSAGE(potential_I(z) > 0.0, z);
    CHECK_MESSAGE(potential_I(z) >= z * z / 2 - 0.5, z);
  }
  CHECK(potential_I(1e-3) > 0.0);
}

TEST_CASE("positivity of u w(u) (1 - cos 2u) on random samples") {
  std::mt19937_64 rng{20240601};
  std::uniform_real_distribution<double> dist{-20.0, 20.0};
  int violations = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double u = dist(rng);
    const double s = std::sin(u);
    if (u * winding_primitive(u) * (2.0 * s * s) < 0.0) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("Turok-Spergel closed form") {
  CHECK(turok_spergel(-1.0, 0.0, 0.0).u == 0.0);
  CHECK(turok_spergel(-1.0, 1.0, 0.0).u == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(turok_spergel(0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(turok_spergel(0.5, 1.0, 0.0), std::domain_error);

  SUBCASE("derivatives match centered differences at second order") {
    const double t = -0.7;
    const double r = 0.4;
    auto errors = [&](double h) {
      const auto exact = turok_spergel(t, r, 0.0);
      const double ut = (turok_spergel(t + h, r, 0.0).u - turok_spergel(t - h, r, 0.0).u) / (2 * h);
      const double ur = (turok_spergel(t, r + h, 0.0).u - turok_spergel(t, r - h, 0.0).u) / (2 * h);
      return std::pair{std::abs(ut - exact.u_t), std::abs(ur - exact.u_r)};
    };
    const auto coarse = errors(1e-2);
    const auto fine = errors(5e-3);
    CHECK(coarse.first / fine.first == doctest::Approx(4.0).epsilon(0.125));
    CHECK(coarse.second / fine.second == doctest::Approx(4.0).epsilon(0.125));
  }

  SUBCASE("solves the wave map equation") {
    const double h = 1e-4;
    for (double t : {-1.0, -0.3}) {
      for (double r : {0.05, 0.5, 2.0}) {
        const auto c = turok_spergel(t, r, 0.0);
        const double utt = (turok_spergel(t + h, r, 0.0).u_t - turok_spergel(t - h, r, 0.0).u_t) / (2 * h);
        const double urr = (turok_spergel(t, r + h, 0.0).u_r - turok_spergel(t, r - h, 0.0).u_r) / (2 * h);
        const double residual = utt - urr - 2.0 / r * c.u_r + std::sin(2 * c.u) / (r * r);
        CHECK(std::abs(residual) < 1e-5 * (1.0 + 1.0 / (r * r)));
      }
    }
  }
}

TEST_CASE("winding number") {
  const auto grid = make_grid(2.5, 256);
  CHECK(winding_number(zero_state(grid, 0.0)) == 0.0);

  FieldState ramp = zero_state(grid, 0.0);
  for (std::size_t j = 0; j < grid.cells(); ++j) ramp.u[j] = pi * grid.node(j) / 2.5;
  CHECK(winding_number(ramp) == doctest::Approx(1.0).epsilon(1e-12));

  // Analytic oracle: w(2 arctan 100) / pi.
  const auto wide = make_grid(100.0, 100000);
  const auto ts = testing::turok_spergel_state(wide, -1.0);
  CHECK(winding_number(ts) == doctest::Approx(0.99999830265280753).epsilon(1e-6));
}

TEST_CASE("gauge potential") {
  const auto grid = make_grid(2.5, 4096);
  const auto zero = gauge_potential(zero_state(grid, 0.0));
  CHECK(testing::max_abs(zero) == 0.0);

  FieldState top = zero_state(grid, 0.0);
  for (auto& u : top.u) u = pi;
  const auto v_top = gauge_potential(top);
  for (std::size_t j : {std::size_t{0}, std::size_t{100}, std::size_t{4000}}) {
    const double r = grid.node(j);
    CHECK(v_top[j] == doctest::Approx(pi * (1 / r - 1 / 2.5)).epsilon(1e-12));
  }

  const auto ts = gauge_potential(testing::turok_spergel_state(grid, -1.0));
  for (std::size_t j = 1; j < ts.size(); ++j) CHECK(ts[j] <= ts[j - 1]);
  // High-precision quadrature of int_{r_0}^{R} w(2 arctan s) / s^2 ds.
  CHECK(ts[0] == doctest::Approx(2.7719057229357916).epsilon(1e-6));
}
