#include <doctest.h>

#include <cmath>

#include "axhm/fields.hpp"
#include "axhm/rng.hpp"

using namespace axhm;

namespace {

double gaussian(double r, double z) {
  const double zt = z - 8.0;
  return std::exp(-r * r - zt * zt);
}

}  // namespace

TEST_CASE("make_grid: cell-centered radii and spacings") {
  GridPtr g = make_grid(8, 8, 4.0, 8.0);
  CHECK(g->h_r == doctest::Approx(0.5));
  CHECK(g->h_z == doctest::Approx(1.0));
  CHECK(g->r_nodes[0] == doctest::Approx(0.25));
  CHECK(g->r_nodes.back() == doctest::Approx(4.0 - 0.25));
  for (double r : g->r_nodes) CHECK(r > 0.0);

  GridPtr p = make_grid(256, 256, 8.0, 16.0);
  CHECK(p->h_r == doctest::Approx(0.03125));
}

TEST_CASE("make_grid: rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(4, 8, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("field_from_fn: sampling and error path") {
  GridPtr g = make_grid(8, 8, 4.0, 8.0);

  ScalarField zero = field_from_fn(g, [](double, double) { return 0.0; }, Parity::even);
  CHECK(zero.max_abs() == 0.0);

  // cell-centering keeps 1/r finite: nearest-axis node r = 0.25 -> 4.0
  ScalarField inv_r = field_from_fn(g, [](double r, double) { return 1.0 / r; }, Parity::odd);
  CHECK(inv_r(0, 0) == doctest::Approx(4.0));

  CHECK_THROWS_AS(field_from_fn(
                      g, [](double r, double) { return r == 0.25 ? 1.0 / 0.0 : 0.0; },
                      Parity::even),
                  std::domain_error);
}

TEST_CASE("parity ghost extension is exact") {
  GridPtr g = make_grid(8, 8, 4.0, 8.0);
  ScalarField odd = field_from_fn(g, [](double r, double z) { return r + z; }, Parity::odd);
  ScalarField even = field_from_fn(g, [](double r, double z) { return r + z; }, Parity::even);
  for (int j = 0; j < g->n_z; ++j) {
    CHECK(odd.ghost_r(-1, j) == -odd(0, j));
    CHECK(even.ghost_r(-1, j) == even(0, j));
    CHECK(odd.ghost_r(g->n_r, j) == 0.0);
  }
}

TEST_CASE("lp_norm: zero field, p validation, sup norm") {
  GridPtr g = make_grid(16, 16, 8.0, 16.0);
  ScalarField zero(g, Parity::even);
  CHECK(lp_norm(zero, 1.0) == 0.0);
  CHECK(lp_norm(zero, 2.0) == 0.0);
  CHECK(lp_norm(zero, INFINITY) == 0.0);
  CHECK_THROWS_AS(lp_norm(zero, 0.5), std::invalid_argument);

  ScalarField f = field_from_fn(g, gaussian, Parity::even);
  // sup of samples: nearest-to-axis column through the z center
  double expect = 0.0;
  for (int i = 0; i < g->n_r; ++i)
    for (int j = 0; j < g->n_z; ++j) expect = std::max(expect, std::abs(f(i, j)));
  CHECK(lp_norm(f, INFINITY) == expect);
  CHECK(expect == doctest::Approx(std::exp(-0.25 * 0.25)).epsilon(1e-12));
}

TEST_CASE("lp_norm: Gaussian L2 against the closed form") {
  // |exp(-r^2 - (z-zc)^2)|_L2(R^3) = (pi/2)^(3/4)
  GridPtr g = make_grid(256, 256, 8.0, 16.0);
  ScalarField f = field_from_fn(g, gaussian, Parity::even);
  const double exact = std::pow(M_PI / 2.0, 0.75);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("lp_norm: quadrature converges at second order") {
  const double exact = std::pow(M_PI / 2.0, 0.75);
  double err[2];
  int k = 0;
  for (int n : {64, 128}) {
    GridPtr g = make_grid(n, n, 8.0, 16.0);
    err[k++] = std::abs(lp_norm(field_from_fn(g, gaussian, Parity::even), 2.0) - exact);
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
}

TEST_CASE("lp_norm scaling and Hoelder sanity on random smooth fields") {
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  Rng rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const double a = rng.uniform(0.4, 2.0);
    const double w = rng.uniform(0.6, 1.8);
    const double zc = 8.0 + rng.uniform(-2.0, 2.0);
    ScalarField f = field_from_fn(
        g,
        [&](double r, double z) {
          const double zt = z - zc;
          return a * std::exp(-(r * r + zt * zt) / (w * w));
        },
        Parity::even);

    const double c = rng.uniform(-3.0, 3.0);
    CHECK(lp_norm(scaled(f, c), 2.0) ==
          doctest::Approx(std::abs(c) * lp_norm(f, 2.0)).epsilon(1e-13));
    CHECK(lp_norm(scaled(f, c), INFINITY) ==
          doctest::Approx(std::abs(c) * lp_norm(f, INFINITY)).epsilon(1e-13));

    const double h = std::max(g->h_r, g->h_z);
    const double lhs = lp_norm(f, 2.0);
    const double rhs = std::sqrt(lp_norm(f, 1.0) * lp_norm(f, INFINITY)) * (1.0 + 10.0 * h * h);
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("pair_sup_norm is the pointwise Euclidean sup") {
  GridPtr g = make_grid(8, 8, 4.0, 8.0);
  ScalarField a(g, Parity::even), b(g, Parity::even);
  a(3, 4) = 3.0;
  b(3, 4) = 4.0;
  b(5, 5) = 4.5;
  CHECK(pair_sup_norm(a, b) == doctest::Approx(5.0));
}
