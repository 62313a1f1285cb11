#include <doctest.h>

#include <cmath>
#include <vector>

#include "axhm/fields.hpp"
#include "axhm/operators.hpp"
#include "axhm/rng.hpp"
#include "axhm/stream_solver.hpp"

using namespace axhm;

namespace {

constexpr double kZc = 8.0;

double bump(double r, double z) {
  const double zt = z - kZc;
  return std::exp(-r * r - zt * zt);
}

// psi* = r exp(-r^2 - (z-zc)^2) and the matching omega = -(Lap - 1/r^2) psi*
double psi_star(double r, double z) { return r * bump(r, z); }
double omega_star(double r, double z) {
  const double zt = z - kZc;
  return r * (10.0 - 4.0 * r * r - 4.0 * zt * zt) * bump(r, z);
}

ScalarField random_odd_field(const GridPtr& g, Rng& rng) {
  const double a = rng.uniform(0.5, 1.5);
  const double w = rng.uniform(0.7, 1.5);
  const double zc = 8.0 + rng.uniform(-2.0, 2.0);
  const double kz = 2.0 * M_PI / g->z_len * rng.uniform_int(0, 3);
  const double ph = rng.uniform(0.0, 2.0 * M_PI);
  return field_from_fn(
      g,
      [=](double r, double z) {
        const double zt = z - zc;
        return a * r * std::exp(-(r * r + zt * zt) / (w * w)) * (1.0 + 0.3 * std::cos(kz * z + ph));
      },
      Parity::odd);
}

double sup_interior_error(const ScalarField& got, const std::function<double(double, double)>& want,
                          int skip_outer = 1) {
  const Grid& g = got.grid();
  double m = 0.0;
  for (int i = 0; i < g.n_r - skip_outer; ++i)
    for (int j = 0; j < g.n_z; ++j)
      m = std::max(m, std::abs(got(i, j) - want(g.r_nodes[i], g.z_nodes[j])));
  return m;
}

}  // namespace

TEST_CASE("partial_derivative: exact special cases") {
  GridPtr g = make_grid(32, 32, 4.0, 8.0);

  // z-derivative of a z-constant field vanishes
  ScalarField zc = field_from_fn(g, [](double r, double) { return r * r; }, Parity::even);
  CHECK(partial_derivative(zc, Axis::z).max_abs() == 0.0);

  // d_r r^2 = 2r, exact for the central stencil away from the outer ghost
  ScalarField dr = partial_derivative(zc, Axis::r);
  CHECK(dr.parity() == Parity::odd);
  for (int i = 0; i < g->n_r - 1; ++i)
    CHECK(dr(i, 0) == doctest::Approx(2.0 * g->r_nodes[i]).epsilon(1e-13));

  // odd f = r: the axis ghost gives exactly 1 at i = 0
  ScalarField lin = field_from_fn(g, [](double r, double) { return r; }, Parity::odd);
  ScalarField dlin = partial_derivative(lin, Axis::r);
  CHECK(dlin(0, 0) == 1.0);
}

TEST_CASE("curl_axisym: swirl bump against symbolic derivatives") {
  GridPtr g = make_grid(128, 128, 8.0, 16.0);
  ScalarField u_theta = field_from_fn(g, psi_star, Parity::odd);  // r * bump
  MeridianVelocity zero{ScalarField(g, Parity::odd), ScalarField(g, Parity::even)};
  VorticityTriple w = curl_axisym(u_theta, zero);

  CHECK(w.omega_r.parity() == Parity::odd);
  CHECK(w.omega_theta.parity() == Parity::odd);
  CHECK(w.omega_z.parity() == Parity::even);
  CHECK(w.omega_theta.max_abs() == 0.0);

  // omega_z = (2 - 2 r^2) bump, omega_r = 2 (z - zc) r bump
  const double h2 = g->h_r * g->h_r + g->h_z * g->h_z;
  CHECK(sup_interior_error(w.omega_z, [](double r, double z) {
          return (2.0 - 2.0 * r * r) * bump(r, z);
        }) < 4.0 * h2);
  CHECK(sup_interior_error(w.omega_r, [](double r, double z) {
          return 2.0 * (z - kZc) * r * bump(r, z);
        }) < 4.0 * h2);

  // spec probe values: omega_z(0.5, zc) = 1.5 e^{-1/4}, omega_r(1, zc+1) = 2 e^{-2}
  CHECK((2.0 - 2.0 * 0.25) * std::exp(-0.25) == doctest::Approx(1.1682).epsilon(1e-4));
  CHECK(2.0 * std::exp(-2.0) == doctest::Approx(0.2707).epsilon(1e-4));

  CHECK_THROWS_AS(curl_axisym(w.omega_z, zero), std::invalid_argument);  // even input rejected
}

TEST_CASE("curl of zero input is zero") {
  GridPtr g = make_grid(16, 16, 4.0, 8.0);
  MeridianVelocity zero{ScalarField(g, Parity::odd), ScalarField(g, Parity::even)};
  VorticityTriple w = curl_axisym(ScalarField(g, Parity::odd), zero);
  CHECK(w.omega_r.max_abs() == 0.0);
  CHECK(w.omega_theta.max_abs() == 0.0);
  CHECK(w.omega_z.max_abs() == 0.0);
}

TEST_CASE("discrete_divergence: zero field and linear solenoidal field") {
  GridPtr g = make_grid(32, 64, 4.0, 8.0);
  MeridianVelocity zero{ScalarField(g, Parity::odd), ScalarField(g, Parity::even)};
  CHECK(discrete_divergence(zero).max_abs() == 0.0);

  // u_r = r, u_z = -2z: div = 1 + 1 - 2 = 0; exact away from the z wrap and
  // the outer Dirichlet ghost
  MeridianVelocity lin{field_from_fn(g, [](double r, double) { return r; }, Parity::odd),
                       field_from_fn(g, [](double, double z) { return -2.0 * z; }, Parity::even)};
  ScalarField div = discrete_divergence(lin);
  for (int i = 0; i < g->n_r - 1; ++i)
    for (int j = 1; j < g->n_z - 1; ++j) CHECK(std::abs(div(i, j)) < 1e-12);
}

TEST_CASE("laplacian_minus: exact cancellation for f = r and symbolic bump value") {
  GridPtr g = make_grid(64, 32, 8.0, 16.0);
  ScalarField lin = field_from_fn(g, [](double r, double) { return r; }, Parity::odd);
  ScalarField lm = laplacian_minus(lin);
  for (int i = 0; i < g->n_r - 1; ++i) CHECK(std::abs(lm(i, 0)) < 1e-11);

  // f = r exp(-r^2): (Lap - 1/r^2) f = r (4 r^2 - 8) exp(-r^2). Away from the
  // axis row the stencil is second order; the probe sweep starts at r = 0.5.
  double err[2];
  int k = 0;
  for (int n : {64, 128}) {
    GridPtr gn = make_grid(n, 32, 8.0, 16.0);
    ScalarField f = field_from_fn(gn, [](double r, double) { return r * std::exp(-r * r); },
                                  Parity::odd);
    ScalarField lf = laplacian_minus(f);
    double e = 0.0;
    for (int i = 0; i < gn->n_r - 1; ++i) {
      const double r = gn->r_nodes[i];
      if (r < 0.5) continue;
      e = std::max(e, std::abs(lf(i, 0) - r * (4.0 * r * r - 8.0) * std::exp(-r * r)));
    }
    err[k++] = e;
  }
  CHECK(err[1] < 0.05);
  const double order = std::log2(err[0] / err[1]);
  CHECK(order > 1.7);
  CHECK(order < 2.3);

  CHECK(laplacian_minus(ScalarField(g, Parity::odd)).max_abs() == 0.0);
  CHECK_THROWS_AS(laplacian_minus(ScalarField(g, Parity::even)), std::invalid_argument);
}

TEST_CASE("laplacian_plus: polynomial identity and 5-D heat-kernel rate") {
  GridPtr g = make_grid(64, 32, 4.0, 8.0);
  ScalarField cst = field_from_fn(g, [](double, double) { return 3.0; }, Parity::even);
  ScalarField lc = laplacian_plus(cst);
  for (int i = 0; i < g->n_r - 1; ++i) CHECK(std::abs(lc(i, 5)) < 1e-10);

  ScalarField r2 = field_from_fn(g, [](double r, double) { return r * r; }, Parity::even);
  ScalarField l8 = laplacian_plus(r2);
  for (int i = 0; i < g->n_r - 1; ++i)
    for (int j = 0; j < g->n_z; ++j) CHECK(l8(i, j) == doctest::Approx(8.0).epsilon(1e-11));

  CHECK_THROWS_AS(laplacian_plus(ScalarField(g, Parity::odd)), std::invalid_argument);

  // f = exp(-rho^2 / (4 t0)), t0 = 1: (Lap + 2/r d_r) f = (rho^2/4 - 5/2) f
  GridPtr gf = make_grid(128, 128, 8.0, 16.0);
  ScalarField ker = field_from_fn(
      gf,
      [](double r, double z) {
        const double zt = z - kZc;
        return std::exp(-(r * r + zt * zt) / 4.0);
      },
      Parity::even);
  const double h2 = gf->h_r * gf->h_r + gf->h_z * gf->h_z;
  CHECK(sup_interior_error(laplacian_plus(ker), [](double r, double z) {
          const double zt = z - kZc;
          const double rho2 = r * r + zt * zt;
          return (rho2 / 4.0 - 2.5) * std::exp(-rho2 / 4.0);
        }) < 4.0 * h2);
}

TEST_CASE("velocity_from_stream: trivial cases and symbolic u_z") {
  GridPtr g = make_grid(128, 128, 8.0, 16.0);
  MeridianVelocity b0 = velocity_from_stream(ScalarField(g, Parity::odd));
  CHECK(b0.u_r.max_abs() == 0.0);
  CHECK(b0.u_z.max_abs() == 0.0);

  // z-independent psi gives u_r = 0 exactly
  ScalarField psi_zc = field_from_fn(g, [](double r, double) { return r * std::exp(-r * r); },
                                     Parity::odd);
  CHECK(velocity_from_stream(psi_zc).u_r.max_abs() == 0.0);

  // psi* gives u_z = (2 - 2 r^2) bump: spec value 1.1682 at (0.5, zc)
  ScalarField psi = field_from_fn(g, psi_star, Parity::odd);
  MeridianVelocity b = velocity_from_stream(psi);
  const double h2 = g->h_r * g->h_r + g->h_z * g->h_z;
  CHECK(sup_interior_error(b.u_z, [](double r, double z) {
          return (2.0 - 2.0 * r * r) * bump(r, z);
        }) < 4.0 * h2);
}

TEST_CASE("divergence of reconstructed velocity vanishes to rounding") {
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField psi = random_odd_field(g, rng);
    CHECK(discrete_divergence(velocity_from_stream(psi)).max_abs() < 1e-12);
  }
}

TEST_CASE("solve_streamfunction: zero input, machine-level operator roundtrip") {
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  StreamfunctionSolver solver(g);

  CHECK(solver.solve(ScalarField(g, Parity::odd)).max_abs() == 0.0);

  ScalarField psi_exact = field_from_fn(g, psi_star, Parity::odd);
  ScalarField omega = scaled(laplacian_minus(psi_exact), -1.0);
  ScalarField psi = solver.solve(omega);
  double err = 0.0;
  for (int i = 0; i < g->n_r; ++i)
    for (int j = 0; j < g->n_z; ++j) err = std::max(err, std::abs(psi(i, j) - psi_exact(i, j)));
  CHECK(err < 1e-9 * psi_exact.max_abs());
}

TEST_CASE("solve_streamfunction: residual below 1e-8 of the data on random input") {
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  StreamfunctionSolver solver(g);
  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    ScalarField omega = random_odd_field(g, rng);
    ScalarField psi = solver.solve(omega);
    ScalarField residual = added(laplacian_minus(psi), omega);
    CHECK(residual.max_abs() <= 1e-8 * omega.max_abs());
  }
}

TEST_CASE("solve_streamfunction: second-order recovery of the analytic solution") {
  double err[2];
  int k = 0;
  for (int n : {64, 128}) {
    GridPtr g = make_grid(n, n, 8.0, 16.0);
    StreamfunctionSolver solver(g);
    ScalarField omega = field_from_fn(g, omega_star, Parity::odd);
    ScalarField psi = solver.solve(omega);
    ScalarField psi_exact = field_from_fn(g, psi_star, Parity::odd);
    err[k++] = added(psi, psi_exact, -1.0).max_abs();
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("single z-mode solve matches an independent dense radial solve") {
  const int n_r = 96, n_z = 32;
  GridPtr g = make_grid(n_r, n_z, 8.0, 16.0);
  StreamfunctionSolver solver(g);

  auto radial = [](double r) { return r * std::exp(-r * r); };
  ScalarField omega = field_from_fn(
      g, [&](double r, double z) { return radial(r) * std::cos(2.0 * M_PI * z / 16.0); },
      Parity::odd);
  ScalarField psi = solver.solve(omega);

  // dense assembly of (L_r - lambda_1) x = -R with Gaussian elimination
  const double hr = g->h_r, hz = g->h_z;
  const double s1 = std::sin(M_PI / n_z);
  const double lambda = 4.0 * s1 * s1 / (hz * hz);
  std::vector<std::vector<double>> A(n_r, std::vector<double>(n_r, 0.0));
  std::vector<double> rhs(n_r);
  for (int i = 0; i < n_r; ++i) {
    const double r = g->r_nodes[i];
    const double irr = 1.0 / (hr * hr);
    const double cfs = 1.0 / (2.0 * hr * r);
    double diag = -2.0 * irr - 1.0 / (r * r) - lambda;
    if (i > 0) A[i][i - 1] = irr - cfs;
    else diag -= irr - cfs;  // odd axis ghost
    if (i < n_r - 1) A[i][i + 1] = irr + cfs;
    A[i][i] = diag;
    rhs[i] = -radial(r);
  }
  // partial-pivot elimination
  for (int c = 0; c < n_r; ++c) {
    int piv = c;
    for (int rI = c + 1; rI < n_r; ++rI)
      if (std::abs(A[rI][c]) > std::abs(A[piv][c])) piv = rI;
    std::swap(A[c], A[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int rI = c + 1; rI < n_r; ++rI) {
      const double f = A[rI][c] / A[c][c];
      if (f == 0.0) continue;
      for (int cc = c; cc < n_r; ++cc) A[rI][cc] -= f * A[c][cc];
      rhs[rI] -= f * rhs[c];
    }
  }
  std::vector<double> x(n_r);
  for (int i = n_r - 1; i >= 0; --i) {
    double acc = rhs[i];
    for (int cc = i + 1; cc < n_r; ++cc) acc -= A[i][cc] * x[cc];
    x[i] = acc / A[i][i];
  }

  double max_err = 0.0, scale = 0.0;
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_z; ++j) {
      const double want = x[i] * std::cos(2.0 * M_PI * g->z_nodes[j] / 16.0);
      max_err = std::max(max_err, std::abs(psi(i, j) - want));
      scale = std::max(scale, std::abs(want));
    }
  CHECK(max_err <= 1e-8 * scale);
}

TEST_CASE("laplacian_minus is self-adjoint in the r-weighted inner product") {
  GridPtr g = make_grid(48, 48, 8.0, 16.0);
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    ScalarField f = random_odd_field(g, rng);
    ScalarField gg = random_odd_field(g, rng);
    const ScalarField lf = laplacian_minus(f);
    const ScalarField lg = laplacian_minus(gg);
    double a = 0.0, b = 0.0, scale = 0.0;
    for (int i = 0; i < g->n_r; ++i)
      for (int j = 0; j < g->n_z; ++j) {
        a += lf(i, j) * gg(i, j) * g->r_nodes[i];
        b += f(i, j) * lg(i, j) * g->r_nodes[i];
        scale += std::abs(lf(i, j) * gg(i, j)) * g->r_nodes[i];
      }
    CHECK(std::abs(a - b) <= 1e-12 * scale);
  }
}

TEST_CASE("Biot-Savart roundtrip converges at second order; p=2 identity") {
  double err[2];
  int k = 0;
  for (int n : {64, 128}) {
    GridPtr g = make_grid(n, n, 8.0, 16.0);
    StreamfunctionSolver solver(g);
    ScalarField omega = field_from_fn(g, omega_star, Parity::odd);
    MeridianVelocity b = velocity_from_stream(solver.solve(omega));
    ScalarField omega_back = curl_axisym(ScalarField(g, Parity::odd), b).omega_theta;
    err[k++] = added(omega_back, omega, -1.0).max_abs();

    const double ratio = lp_norm(meridian_grad_magnitude(b), 2.0) / lp_norm(omega, 2.0);
    const double h = std::max(g->h_r, g->h_z);
    CHECK(ratio > 1.0 - 10.0 * h * h);
    CHECK(ratio < 1.0 + 10.0 * h * h);
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("parity bookkeeping through the operators") {
  GridPtr g = make_grid(16, 16, 4.0, 8.0);
  ScalarField even(g, Parity::even), odd(g, Parity::odd);
  CHECK(partial_derivative(even, Axis::r).parity() == Parity::odd);
  CHECK(partial_derivative(odd, Axis::r).parity() == Parity::even);
  CHECK(partial_derivative(even, Axis::z).parity() == Parity::even);
  CHECK(second_derivative(odd, Axis::r).parity() == Parity::odd);
  CHECK(multiplied_by_r(odd).parity() == Parity::even);
  CHECK(divided_by_r(even).parity() == Parity::odd);
  CHECK(multiplied(odd, odd).parity() == Parity::even);
  CHECK(multiplied(odd, even).parity() == Parity::odd);
  CHECK(laplacian_minus(odd).parity() == Parity::odd);
  CHECK(laplacian_plus(even).parity() == Parity::even);
  MeridianVelocity b = velocity_from_stream(odd);
  CHECK(b.u_r.parity() == Parity::odd);
  CHECK(b.u_z.parity() == Parity::even);
}

TEST_CASE("sobolev_norm: zero, order-0 composition, Gaussian order-1 value") {
  GridPtr g = make_grid(256, 256, 8.0, 16.0);
  ScalarField zero(g, Parity::even);
  CHECK(sobolev_norm({&zero}, 3) == 0.0);
  CHECK_THROWS_AS(sobolev_norm({&zero}, 4), std::invalid_argument);

  ScalarField f = field_from_fn(g, bump, Parity::even);
  const double l2 = lp_norm(f, 2.0);
  CHECK(sobolev_norm({&f}, 0) == doctest::Approx(l2 * l2).epsilon(1e-13));

  // closed form: |f|^2 + |f_r|^2 + |f_z|^2 integrates to 4 (pi/2)^(3/2)
  const double exact = 4.0 * std::pow(M_PI / 2.0, 1.5);
  CHECK(sobolev_norm({&f}, 1) == doctest::Approx(exact).epsilon(2e-3));

  // monotone in the field set and in the order
  CHECK(sobolev_norm({&f}, 2) > sobolev_norm({&f}, 1));
  ScalarField f2 = scaled(f, 0.5);
  CHECK(sobolev_norm({&f, &f2}, 1) > sobolev_norm({&f}, 1));
}
