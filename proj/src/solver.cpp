#include "axhm/solver.hpp"

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace axhm {

void PhysicalParams::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be >= 0");
  if (!(hall >= 0.0) || !std::isfinite(hall)) throw std::invalid_argument("hall must be >= 0");
  if (!(mu0_inv >= 0.0) || !std::isfinite(mu0_inv))
    throw std::invalid_argument("mu0_inv must be >= 0");
}

double bump_eval(const BumpSpec& spec, double r, double z, double z_len) {
  if (spec.shape == Shape::zero) return 0.0;
  const double zc = spec.z_center < 0.0 ? 0.5 * z_len : spec.z_center;
  const double rr = r / spec.r_width;
  const double zz = (z - zc) / spec.z_width;
  const double g = std::exp(-rr * rr - zz * zz);
  return spec.shape == Shape::ring ? rr * rr * g : g;
}

State init_state(const GridPtr& grid, const InitialDataSpec& spec, const PhysicalParams& params) {
  params.validate();
  if (!(spec.eps >= 0.0)) throw std::invalid_argument("init_state: eps must be >= 0");

  State s;
  s.t = 0.0;
  s.params = params;

  if (spec.eps > 0.0) {
    // unit-amplitude swirl u_theta = r * bump, then scale so that the sup
    // norm of the discrete (omega_r, omega_z) equals eps
    ScalarField u_theta_1 = field_from_fn(
        grid, [&](double r, double z) { return r * bump_eval(spec.swirl_shape, r, z, grid->z_len); },
        Parity::odd);
    MeridianVelocity zero_b{ScalarField(grid, Parity::odd), ScalarField(grid, Parity::even)};
    VorticityTriple w = curl_axisym(u_theta_1, zero_b);
    const double sup = pair_sup_norm(w.omega_r, w.omega_z);
    if (sup == 0.0)
      throw std::invalid_argument("init_state: swirl shape is identically zero but eps > 0");
    s.gamma = multiplied_by_r(scaled(u_theta_1, spec.eps / sup));
  } else {
    s.gamma = ScalarField(grid, Parity::even);
  }

  s.big_h = field_from_fn(
      grid,
      [&](double r, double z) { return spec.h_amp * bump_eval(spec.h_shape, r, z, grid->z_len); },
      Parity::even);
  s.omega = field_from_fn(
      grid,
      [&](double r, double z) {
        return spec.omega_amp * bump_eval(spec.omega_shape, r, z, grid->z_len);
      },
      Parity::even);
  return s;
}

MeridianVelocity reconstruct_velocity(const State& state, StreamfunctionSolver& solver) {
  if (state.omega.max_abs() == 0.0) {
    // the solve of a zero field is identically zero; skip the transforms
    return {ScalarField(state.omega.grid_ptr(), Parity::odd),
            ScalarField(state.omega.grid_ptr(), Parity::even)};
  }
  const ScalarField omega_theta = multiplied_by_r(state.omega);
  const ScalarField psi = solver.solve(omega_theta);
  return velocity_from_stream(psi);
}

namespace {

/// u_r D_r(x) + u_z D_z(x)
ScalarField advection(const MeridianVelocity& b, const ScalarField& x) {
  const ScalarField xr = partial_derivative(x, Axis::r);
  const ScalarField xz = partial_derivative(x, Axis::z);
  ScalarField out(x.grid_ptr(), x.parity());
  auto ur = b.u_r.values();
  auto uz = b.u_z.values();
  auto pr = xr.values();
  auto pz = xz.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = ur[k] * pr[k] + uz[k] * pz[k];
  return out;
}

void throw_if_nonfinite(const Tendency& t) {
  const ScalarField* fields[3] = {&t.d_gamma, &t.d_omega, &t.d_big_h};
  for (const ScalarField* f : fields) {
    auto v = f->values();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!std::isfinite(v[k])) {
        const int nz = f->nz();
        throw NonFiniteError(static_cast<int>(k) / nz, static_cast<int>(k) % nz);
      }
  }
}

}  // namespace

Tendency compute_rhs(const State& state, StreamfunctionSolver& solver, const ForcingFn* forcing) {
  const Grid& g = state.gamma.grid();
  const MeridianVelocity b = reconstruct_velocity(state, solver);

  Tendency tend;
  tend.d_gamma = scaled(advection(b, state.gamma), -1.0);

  // -b.grad Omega - mu0_inv d_z(H^2) + d_z(Gamma^2)/r^4
  {
    ScalarField d = scaled(advection(b, state.omega), -1.0);
    const ScalarField dz_h2 = partial_derivative(multiplied(state.big_h, state.big_h), Axis::z);
    const ScalarField dz_g2 = partial_derivative(multiplied(state.gamma, state.gamma), Axis::z);
    auto pd = d.values();
    auto ph = dz_h2.values();
    auto pg = dz_g2.values();
    const double mu = state.params.mu0_inv;
    for (int i = 0; i < g.n_r; ++i) {
      const double r2 = g.r_nodes[i] * g.r_nodes[i];
      const double ir4 = 1.0 / (r2 * r2);
      for (int j = 0; j < g.n_z; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * g.n_z + j;
        pd[k] += -mu * ph[k] + ir4 * pg[k];
      }
    }
    tend.d_omega = std::move(d);
  }

  // -b.grad H + nu (Lap + 2/r d_r) H + hall 2 H d_z H
  {
    ScalarField d = scaled(advection(b, state.big_h), -1.0);
    const ScalarField lap = laplacian_plus(state.big_h);
    const ScalarField hz = partial_derivative(state.big_h, Axis::z);
    auto pd = d.values();
    auto pl = lap.values();
    auto ph = state.big_h.values();
    auto pz = hz.values();
    const double nu = state.params.nu;
    const double hall2 = 2.0 * state.params.hall;
    for (std::size_t k = 0; k < pd.size(); ++k) pd[k] += nu * pl[k] + hall2 * ph[k] * pz[k];
    tend.d_big_h = std::move(d);
  }

  if (forcing) (*forcing)(state.t, tend);
  throw_if_nonfinite(tend);
  return tend;
}

double cfl_dt(const State& state, StreamfunctionSolver& solver, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("cfl_dt: safety must be in (0, 1]");
  const Grid& g = state.gamma.grid();
  const double h_min = std::min(g.h_r, g.h_z);

  const MeridianVelocity b = reconstruct_velocity(state, solver);
  const double b_max = std::max(b.u_r.max_abs(), b.u_z.max_abs());
  const double h_max = state.big_h.max_abs();

  double dt = h_min / (b_max + DBL_EPSILON);
  dt = std::min(dt, g.h_z / (2.0 * state.params.hall * h_max + DBL_EPSILON));
  if (state.params.nu > 0.0) {
    constexpr double c_lap = 5.0;  // 5-D Laplacian stencil weight
    dt = std::min(dt, h_min * h_min / (4.0 * state.params.nu * c_lap));
  }
  return safety * dt;
}

namespace {

/// out = ca * a + cb * (b + dt * f)
ScalarField rk_combine(const ScalarField& a, double ca, const ScalarField& b, double cb,
                       const ScalarField& f, double dt) {
  ScalarField out(a.grid_ptr(), a.parity());
  auto pa = a.values();
  auto pb = b.values();
  auto pf = f.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = ca * pa[k] + cb * (pb[k] + dt * pf[k]);
  return out;
}

State rk_stage(const State& base, double cb_weight, const State& stage, const Tendency& f,
               double dt) {
  State out;
  out.params = base.params;
  const double ca = 1.0 - cb_weight;
  out.gamma = rk_combine(base.gamma, ca, stage.gamma, cb_weight, f.d_gamma, dt);
  out.omega = rk_combine(base.omega, ca, stage.omega, cb_weight, f.d_omega, dt);
  out.big_h = rk_combine(base.big_h, ca, stage.big_h, cb_weight, f.d_big_h, dt);
  return out;
}

}  // namespace

State step(const State& state, StreamfunctionSolver& solver, double dt, const ForcingFn* forcing) {
  // Shu-Osher SSPRK3
  const Tendency f0 = compute_rhs(state, solver, forcing);
  State s1 = rk_stage(state, 1.0, state, f0, dt);
  s1.t = state.t + dt;

  const Tendency f1 = compute_rhs(s1, solver, forcing);
  State s2 = rk_stage(state, 0.25, s1, f1, dt);
  s2.t = state.t + 0.5 * dt;

  const Tendency f2 = compute_rhs(s2, solver, forcing);
  State out = rk_stage(state, 2.0 / 3.0, s2, f2, dt);
  out.t = state.t + dt;
  return out;
}

Stepper::Stepper(GridPtr grid)
    : grid_(grid),
      solver_(grid),
      omega_theta_(grid, Parity::odd),
      psi_(grid, Parity::odd),
      u_r_(grid, Parity::odd),
      u_z_(grid, Parity::even) {
  auto make_state = [&]() {
    State s;
    s.gamma = ScalarField(grid_, Parity::even);
    s.omega = ScalarField(grid_, Parity::even);
    s.big_h = ScalarField(grid_, Parity::even);
    return s;
  };
  sa_ = make_state();
  sb_ = make_state();
}

void Stepper::velocity_for(const ScalarField& omega, double t_key) {
  if (vel_valid_ && vel_key_ == omega.values().data() && vel_key_t_ == t_key) return;
  const Grid& g = *grid_;
  if (omega.max_abs() == 0.0) {
    std::fill(u_r_.values().begin(), u_r_.values().end(), 0.0);
    std::fill(u_z_.values().begin(), u_z_.values().end(), 0.0);
  } else {
    solver_.solve_r_weighted_into(omega, psi_);
    const double cz = 1.0 / (2.0 * g.h_z);
    const int nz = g.n_z;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_r; ++i) {
      const double c = 1.0 / (2.0 * g.h_r * g.r_nodes[i]);
      const double rp = i + 1 < g.n_r ? g.r_nodes[i + 1] : 0.0;
      const double rm = i > 0 ? g.r_nodes[i - 1] : g.r_nodes[0];
      for (int j = 0; j < nz; ++j) {
        const int jp = j == nz - 1 ? 0 : j + 1;
        const int jm = j == 0 ? nz - 1 : j - 1;
        u_r_(i, j) = -cz * (psi_(i, jp) - psi_(i, jm));
        const double wp = i + 1 < g.n_r ? rp * psi_(i + 1, j) : 0.0;
        const double wm = i > 0 ? rm * psi_(i - 1, j) : rm * psi_(0, j);
        u_z_(i, j) = c * (wp - wm);
      }
    }
  }
  vel_valid_ = true;
  vel_key_ = omega.values().data();
  vel_key_t_ = t_key;
}

double Stepper::cfl(const State& state, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("cfl: safety must be in (0, 1]");
  const Grid& g = *grid_;
  const double h_min = std::min(g.h_r, g.h_z);
  velocity_for(state.omega, state.t);
  const double b_max = std::max(u_r_.max_abs(), u_z_.max_abs());
  const double h_max = state.big_h.max_abs();
  double dt = h_min / (b_max + DBL_EPSILON);
  dt = std::min(dt, g.h_z / (2.0 * state.params.hall * h_max + DBL_EPSILON));
  if (state.params.nu > 0.0)
    dt = std::min(dt, h_min * h_min / (4.0 * state.params.nu * 5.0));
  return safety * dt;
}

void Stepper::stage(const State& base, const State& in, State& out, double t_stage, double dt,
                    double ca, double cb, const ForcingFn* forcing, bool check_finite) {
  const Grid& g = *grid_;
  velocity_for(in.omega, in.t);

  const bool have_forcing = forcing && *forcing;
  if (have_forcing) {
    if (!forcing_buf_ready_) {
      forcing_buf_.d_gamma = ScalarField(grid_, Parity::even);
      forcing_buf_.d_omega = ScalarField(grid_, Parity::even);
      forcing_buf_.d_big_h = ScalarField(grid_, Parity::even);
      forcing_buf_ready_ = true;
    }
    for (ScalarField* f : {&forcing_buf_.d_gamma, &forcing_buf_.d_omega, &forcing_buf_.d_big_h})
      std::fill(f->values().begin(), f->values().end(), 0.0);
    (*forcing)(t_stage, forcing_buf_);
  }

  const double cz = 1.0 / (2.0 * g.h_z);
  const double cr = 1.0 / (2.0 * g.h_r);
  const double irr = 1.0 / (g.h_r * g.h_r);
  const double izz = 1.0 / (g.h_z * g.h_z);
  const double mu = in.params.mu0_inv;
  const double nu = in.params.nu;
  const double hall2 = 2.0 * in.params.hall;
  const int nz = g.n_z;
  double acc = 0.0;

#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_nodes[i];
    const double cfs = 3.0 / (2.0 * g.h_r * r);
    const double r2 = r * r;
    const double ir4 = 1.0 / (r2 * r2);
    const bool at_axis = i == 0;
    const bool at_rim = i == g.n_r - 1;
    for (int j = 0; j < nz; ++j) {
      const int jp = j == nz - 1 ? 0 : j + 1;
      const int jm = j == 0 ? nz - 1 : j - 1;
      const double ur = u_r_(i, j);
      const double uz = u_z_(i, j);

      const double g_c = in.gamma(i, j);
      const double g_p = at_rim ? 0.0 : in.gamma(i + 1, j);
      const double g_m = at_axis ? g_c : in.gamma(i - 1, j);
      const double g_jp = in.gamma(i, jp);
      const double g_jm = in.gamma(i, jm);

      const double o_c = in.omega(i, j);
      const double o_p = at_rim ? 0.0 : in.omega(i + 1, j);
      const double o_m = at_axis ? o_c : in.omega(i - 1, j);
      const double o_jp = in.omega(i, jp);
      const double o_jm = in.omega(i, jm);

      const double h_c = in.big_h(i, j);
      const double h_p = at_rim ? 0.0 : in.big_h(i + 1, j);
      const double h_m = at_axis ? h_c : in.big_h(i - 1, j);
      const double h_jp = in.big_h(i, jp);
      const double h_jm = in.big_h(i, jm);

      double d_gamma = -(ur * cr * (g_p - g_m) + uz * cz * (g_jp - g_jm));
      double d_omega = -(ur * cr * (o_p - o_m) + uz * cz * (o_jp - o_jm)) -
                       mu * cz * (h_jp * h_jp - h_jm * h_jm) +
                       ir4 * cz * (g_jp * g_jp - g_jm * g_jm);
      const double lap_h =
          irr * (h_p - 2.0 * h_c + h_m) + cfs * (h_p - h_m) + izz * (h_jp - 2.0 * h_c + h_jm);
      double d_big_h = -(ur * cr * (h_p - h_m) + uz * cz * (h_jp - h_jm)) + nu * lap_h +
                       hall2 * h_c * cz * (h_jp - h_jm);

      if (have_forcing) {
        d_gamma += forcing_buf_.d_gamma(i, j);
        d_omega += forcing_buf_.d_omega(i, j);
        d_big_h += forcing_buf_.d_big_h(i, j);
      }

      const double out_g = ca * base.gamma(i, j) + cb * (g_c + dt * d_gamma);
      const double out_o = ca * base.omega(i, j) + cb * (o_c + dt * d_omega);
      const double out_h = ca * base.big_h(i, j) + cb * (h_c + dt * d_big_h);
      out.gamma(i, j) = out_g;
      out.omega(i, j) = out_o;
      out.big_h(i, j) = out_h;
      if (check_finite) acc += out_g + out_o + out_h;
    }
  }
  if (check_finite) last_finite_ = std::isfinite(acc);
  vel_valid_ = false;  // in was consumed; out differs
}

bool Stepper::step_inplace(State& state, double dt, const ForcingFn* forcing) {
  // Shu-Osher SSPRK3, same coefficients as step()
  sa_.params = sb_.params = state.params;

  velocity_for(state.omega, state.t);  // reuses the cfl cache when fresh
  vel_valid_ = true;                   // keep it alive for the first stage
  vel_key_ = state.omega.values().data();
  vel_key_t_ = state.t;

  stage(state, state, sa_, state.t, dt, 0.0, 1.0, forcing, false);
  sa_.t = state.t + dt;
  stage(state, sa_, sb_, sa_.t, dt, 0.75, 0.25, forcing, false);
  sb_.t = state.t + 0.5 * dt;
  last_finite_ = true;
  stage(state, sb_, state, sb_.t, dt, 1.0 / 3.0, 2.0 / 3.0, forcing, true);
  state.t += dt;
  return last_finite_;
}

namespace {

constexpr char kMagic[4] = {'A', 'X', 'H', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double x) {
  const std::uint64_t v = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("checkpoint: truncated file");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(v);
}

void put_field(std::ostream& os, const ScalarField& f) {
  for (double x : f.values()) put_f64(os, x);
}

void get_field(std::istream& is, ScalarField& f) {
  for (double& x : f.values()) x = get_f64(is);
}

}  // namespace

void checkpoint_save(const State& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
  const Grid& g = state.gamma.grid();
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(g.n_r));
  put_u32(os, static_cast<std::uint32_t>(g.n_z));
  put_f64(os, g.r_max);
  put_f64(os, g.z_len);
  put_f64(os, state.t);
  put_f64(os, state.params.nu);
  put_f64(os, state.params.hall);
  put_f64(os, state.params.mu0_inv);
  put_field(os, state.gamma);
  put_field(os, state.omega);
  put_field(os, state.big_h);
  os.flush();
  if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

State checkpoint_load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
  char magic[4];
  if (!is.read(magic, 4)) throw std::runtime_error("checkpoint: truncated file");
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("checkpoint: bad magic");
  const std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const int n_r = static_cast<int>(get_u32(is));
  const int n_z = static_cast<int>(get_u32(is));
  const double r_max = get_f64(is);
  const double z_len = get_f64(is);
  GridPtr grid = make_grid(n_r, n_z, r_max, z_len);

  State s;
  s.t = get_f64(is);
  s.params.nu = get_f64(is);
  s.params.hall = get_f64(is);
  s.params.mu0_inv = get_f64(is);
  s.gamma = ScalarField(grid, Parity::even);
  s.omega = ScalarField(grid, Parity::even);
  s.big_h = ScalarField(grid, Parity::even);
  get_field(is, s.gamma);
  get_field(is, s.omega);
  get_field(is, s.big_h);
  return s;
}

}  // namespace axhm
