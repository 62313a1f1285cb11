#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "axhm/solver.hpp"

using namespace axhm;

namespace {

InitialDataSpec default_spec() { return InitialDataSpec{}; }

State pure_omega_state(const GridPtr& g) {
  InitialDataSpec spec;
  spec.eps = 0.0;
  spec.h_amp = 0.0;
  spec.omega_amp = 1.0;
  return init_state(g, spec, PhysicalParams{1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("init_state: swirl calibration hits eps exactly") {
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  InitialDataSpec spec = default_spec();
  spec.eps = 1e-2;
  State s = init_state(g, spec, PhysicalParams{});
  CHECK(s.gamma.parity() == Parity::even);

  const ScalarField u_theta = divided_by_r(s.gamma);
  MeridianVelocity zero{ScalarField(g, Parity::odd), ScalarField(g, Parity::even)};
  const VorticityTriple w = curl_axisym(u_theta, zero);
  const double measured = pair_sup_norm(w.omega_r, w.omega_z);
  CHECK(measured > 0.0099);
  CHECK(measured < 0.0101);
}

TEST_CASE("init_state: zero swirl is exactly zero; H amplitude lands on the sup") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  InitialDataSpec spec = default_spec();
  spec.eps = 0.0;
  State s = init_state(g, spec, PhysicalParams{});
  CHECK(s.gamma.max_abs() == 0.0);

  // gaussian bump with unit widths: sup sample sits at the nearest-axis
  // column through the z center
  const double r0 = g->r_nodes[0];
  CHECK(s.big_h.max_abs() == doctest::Approx(std::exp(-r0 * r0)).epsilon(1e-12));
}

TEST_CASE("init_state: zero-shape swirl with positive eps is an error") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  InitialDataSpec spec = default_spec();
  spec.eps = 0.1;
  spec.swirl_shape.shape = Shape::zero;
  CHECK_THROWS_AS(init_state(g, spec, PhysicalParams{}), std::invalid_argument);
  InitialDataSpec negative;
  negative.eps = -1.0;
  CHECK_THROWS_AS(init_state(g, negative, PhysicalParams{}), std::invalid_argument);
}

TEST_CASE("compute_rhs: zero state gives zero tendency") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  State s;
  s.gamma = ScalarField(g, Parity::even);
  s.omega = ScalarField(g, Parity::even);
  s.big_h = ScalarField(g, Parity::even);
  StreamfunctionSolver solver(g);
  Tendency t = compute_rhs(s, solver);
  CHECK(t.d_gamma.max_abs() == 0.0);
  CHECK(t.d_omega.max_abs() == 0.0);
  CHECK(t.d_big_h.max_abs() == 0.0);
}

TEST_CASE("compute_rhs: z-independent H reduces to the radial diffusion operator") {
  GridPtr g = make_grid(96, 32, 8.0, 16.0);
  State s;
  s.params = PhysicalParams{0.7, 1.0, 1.0};
  s.gamma = ScalarField(g, Parity::even);
  s.omega = ScalarField(g, Parity::even);
  s.big_h = field_from_fn(g, [](double r, double) { return std::exp(-r * r); }, Parity::even);
  StreamfunctionSolver solver(g);
  Tendency t = compute_rhs(s, solver);
  CHECK(t.d_gamma.max_abs() == 0.0);
  CHECK(t.d_omega.max_abs() == 0.0);

  // nu (d_rr + 3/r d_r) e^{-r^2} = nu (4 r^2 - 8) e^{-r^2}
  const double tol = 8.0 * g->h_r * g->h_r;
  for (int i = 0; i < g->n_r - 1; ++i) {
    const double r = g->r_nodes[i];
    const double want = 0.7 * (4.0 * r * r - 8.0) * std::exp(-r * r);
    CHECK(std::abs(t.d_big_h(i, 3) - want) < tol);
  }
}

TEST_CASE("compute_rhs: advection tendency converges under refinement at a shared node") {
  // grids n, 3n, 9n share cell centers: (i + 1/2) -> (3i + 1 + 1/2)
  auto probe = [](int n, int i, int j) {
    GridPtr g = make_grid(n, n, 8.0, 16.0);
    State s = pure_omega_state(g);
    StreamfunctionSolver solver(g);
    return compute_rhs(s, solver).d_omega(i, j);
  };
  const int i0 = 12, j0 = 16;
  const double c = probe(64, i0, j0);
  const double m = probe(192, 3 * i0 + 1, 3 * j0);
  const double f = probe(576, 9 * i0 + 4, 9 * j0);
  const double e_c = std::abs(c - f);
  const double e_m = std::abs(m - f);
  CHECK(e_c > 0.0);
  // order-2 refinement: errors should drop by about 9 per factor-3 step
  const double ratio = e_c / e_m;
  CHECK(ratio > 4.5);
  CHECK(ratio < 18.0);
}

TEST_CASE("compute_rhs: non-finite tendency raises the breakdown signal") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  State s;
  s.gamma = ScalarField(g, Parity::even);
  s.omega = ScalarField(g, Parity::even);
  s.big_h = field_from_fn(g, [](double r, double z) { return 1e308 * bump_eval(BumpSpec{}, r, z, 16.0); },
                          Parity::even);
  StreamfunctionSolver solver(g);
  CHECK_THROWS_AS(compute_rhs(s, solver), NonFiniteError);
}

TEST_CASE("cfl_dt: diffusive, Hall-advective and guard cases") {
  GridPtr g = make_grid(32, 64, 8.0, 16.0);
  const double h_min = std::min(g->h_r, g->h_z);
  StreamfunctionSolver solver(g);

  State zero;
  zero.gamma = ScalarField(g, Parity::even);
  zero.omega = ScalarField(g, Parity::even);
  zero.big_h = ScalarField(g, Parity::even);

  zero.params = PhysicalParams{1.0, 1.0, 1.0};
  CHECK(cfl_dt(zero, solver, 0.5) ==
        doctest::Approx(0.5 * h_min * h_min / 20.0).epsilon(1e-12));

  // max|H| = 2, hall = 1, nu = 0, b = 0  ->  dt = safety * h_z / 4
  State hall = zero;
  hall.params = PhysicalParams{0.0, 1.0, 1.0};
  hall.big_h = field_from_fn(g, [](double, double) { return 2.0; }, Parity::even);
  CHECK(cfl_dt(hall, solver, 1.0) == doctest::Approx(g->h_z / 4.0).epsilon(1e-10));

  // advective limit: nu = 0, H = 0, velocity from a vorticity bump
  State adv = zero;
  adv.params = PhysicalParams{0.0, 1.0, 1.0};
  adv.omega = field_from_fn(
      g, [&](double r, double z) { return bump_eval(BumpSpec{}, r, z, g->z_len); }, Parity::even);
  const MeridianVelocity b = reconstruct_velocity(adv, solver);
  const double b_max = std::max(b.u_r.max_abs(), b.u_z.max_abs());
  CHECK(cfl_dt(adv, solver, 1.0) == doctest::Approx(h_min / (b_max + DBL_EPSILON)).epsilon(1e-10));

  CHECK_THROWS_AS(cfl_dt(zero, solver, 0.0), std::invalid_argument);
}

TEST_CASE("step: zero state stays zero, clock advances") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  State s;
  s.gamma = ScalarField(g, Parity::even);
  s.omega = ScalarField(g, Parity::even);
  s.big_h = ScalarField(g, Parity::even);
  StreamfunctionSolver solver(g);
  State out = step(s, solver, 1e-3);
  CHECK(out.t == doctest::Approx(1e-3));
  CHECK(out.gamma.max_abs() == 0.0);
  CHECK(out.omega.max_abs() == 0.0);
  CHECK(out.big_h.max_abs() == 0.0);
}

TEST_CASE("step: no-swirl subspace is exact over many steps") {
  GridPtr g = make_grid(32, 32, 8.0, 16.0);
  InitialDataSpec spec = default_spec();
  spec.eps = 0.0;
  State s = init_state(g, spec, PhysicalParams{1.0, 1.0, 1.0});
  StreamfunctionSolver solver(g);
  for (int k = 0; k < 20; ++k) {
    s = step(s, solver, cfl_dt(s, solver, 0.8));
    CHECK(s.gamma.max_abs() == 0.0);
  }
  // the rest of the system did evolve
  CHECK(s.big_h.all_finite());
  CHECK(s.omega.max_abs() > 0.0);
}

TEST_CASE("step: pure diffusion tracks the 5-D Gaussian kernel over 100 steps") {
  const double t0 = 0.5;
  GridPtr g = make_grid(64, 64, 8.0, 16.0);
  auto kernel = [&](double r, double z, double t) {
    const double zt = z - 8.0;
    const double sden = t0 + t;
    return std::pow(t0 / sden, 2.5) * std::exp(-(r * r + zt * zt) / (4.0 * sden));
  };
  State s;
  s.params = PhysicalParams{1.0, 0.0, 0.0};
  s.gamma = ScalarField(g, Parity::even);
  s.omega = ScalarField(g, Parity::even);
  s.big_h = field_from_fn(g, [&](double r, double z) { return kernel(r, z, 0.0); }, Parity::even);
  StreamfunctionSolver solver(g);
  for (int k = 0; k < 100; ++k) s = step(s, solver, cfl_dt(s, solver, 0.8));

  double err = 0.0;
  for (int i = 0; i < g->n_r; ++i)
    for (int j = 0; j < g->n_z; ++j)
      err = std::max(err, std::abs(s.big_h(i, j) - kernel(g->r_nodes[i], g->z_nodes[j], s.t)));
  CHECK(err < 2e-3);
}

TEST_CASE("checkpoint: bitwise roundtrip") {
  GridPtr g = make_grid(16, 16, 4.0, 8.0);
  InitialDataSpec spec = default_spec();
  spec.eps = 0.05;
  State s = init_state(g, spec, PhysicalParams{0.25, 0.5, 2.0});
  s.t = 0.7071067811865476;

  const std::string path = "ckpt_roundtrip.axhm";
  checkpoint_save(s, path);
  State loaded = checkpoint_load(path);
  CHECK(loaded.t == s.t);
  CHECK(loaded.params.nu == s.params.nu);
  CHECK(loaded.params.hall == s.params.hall);
  CHECK(loaded.params.mu0_inv == s.params.mu0_inv);
  CHECK(loaded.gamma.grid().same_geometry(s.gamma.grid()));
  auto same_bits = [](const ScalarField& a, const ScalarField& b) {
    auto pa = a.values();
    auto pb = b.values();
    for (std::size_t k = 0; k < pa.size(); ++k)
      if (pa[k] != pb[k]) return false;
    return true;
  };
  CHECK(same_bits(loaded.gamma, s.gamma));
  CHECK(same_bits(loaded.omega, s.omega));
  CHECK(same_bits(loaded.big_h, s.big_h));
  std::remove(path.c_str());
}

TEST_CASE("checkpoint: structured errors on bad files") {
  GridPtr g = make_grid(16, 16, 4.0, 8.0);
  State s = init_state(g, default_spec(), PhysicalParams{});
  const std::string path = "ckpt_bad.axhm";
  checkpoint_save(s, path);

  // truncate
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  CHECK_THROWS_WITH_AS(checkpoint_load(path), doctest::Contains("truncated"), std::runtime_error);

  // bad version
  checkpoint_save(s, path);
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(4);
    const char v2[4] = {2, 0, 0, 0};
    f.write(v2, 4);
  }
  CHECK_THROWS_WITH_AS(checkpoint_load(path), doctest::Contains("unsupported version"),
                       std::runtime_error);

  // bad magic
  checkpoint_save(s, path);
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.write("NOPE", 4);
  }
  CHECK_THROWS_WITH_AS(checkpoint_load(path), doctest::Contains("magic"), std::runtime_error);
  std::remove(path.c_str());
}
