#include "axhm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "axhm/csv.hpp"

namespace axhm {

namespace {

// Analytic profile A r^pow exp(-a r^2 - c (z - zc)^2) with a shared slow
// time factor g(t). Closed-form derivatives keep the forcing exact.
struct TimeFactor {
  static double g(double t) { return 1.0 + 0.3 * std::sin(1.3 * t); }
  static double gp(double t) { return 0.39 * std::cos(1.3 * t); }
};

struct CoupledParams {
  // stream function psi = A_psi r E_psi g(t); Omega follows from
  // -(Lap - 1/r^2) psi / r
  double A_psi = 0.2, a_psi = 1.0, c_psi = 1.0, dzc_psi = 0.0;
  // Gamma = A_g r^2 E_g g(t)
  double A_g = 0.3, a_g = 1.0 / 1.44, c_g = 1.0 / 1.96, dzc_g = 0.5;
  // H = A_h E_h g(t)
  double A_h = 0.5, a_h = 1.0 / 1.21, c_h = 1.0 / 0.81, dzc_h = -0.4;
};

constexpr double kKernelT0 = 0.5;

double kernel_h(double r, double zt, double t, double nu) {
  const double s = kKernelT0 + nu * t;
  const double rho2 = r * r + zt * zt;
  return std::pow(kKernelT0 / s, 2.5) * std::exp(-rho2 / (4.0 * s));
}

}  // namespace

State ManufacturedCase::exact_state(const GridPtr& grid, double t) const {
  State s;
  s.t = t;
  s.params = params;
  const double zc = 0.5 * grid->z_len;
  if (id == "zero") {
    s.gamma = ScalarField(grid, Parity::even);
    s.omega = ScalarField(grid, Parity::even);
    s.big_h = ScalarField(grid, Parity::even);
    return s;
  }
  if (id == "linear_h_kernel") {
    s.gamma = ScalarField(grid, Parity::even);
    s.omega = ScalarField(grid, Parity::even);
    const double nu = params.nu;
    s.big_h = field_from_fn(
        grid, [&](double r, double z) { return kernel_h(r, z - zc, t, nu); }, Parity::even);
    return s;
  }
  const CoupledParams cp;
  const double g = TimeFactor::g(t);
  s.gamma = field_from_fn(
      grid,
      [&](double r, double z) {
        const double zt = z - (zc + cp.dzc_g);
        return cp.A_g * g * r * r * std::exp(-cp.a_g * r * r - cp.c_g * zt * zt);
      },
      Parity::even);
  s.omega = field_from_fn(
      grid,
      [&](double r, double z) {
        const double zt = z - (zc + cp.dzc_psi);
        const double e = std::exp(-cp.a_psi * r * r - cp.c_psi * zt * zt);
        const double q = 8.0 * cp.a_psi + 2.0 * cp.c_psi -
                         4.0 * cp.a_psi * cp.a_psi * r * r - 4.0 * cp.c_psi * cp.c_psi * zt * zt;
        return cp.A_psi * g * e * q;
      },
      Parity::even);
  s.big_h = field_from_fn(
      grid,
      [&](double r, double z) {
        const double zt = z - (zc + cp.dzc_h);
        return cp.A_h * g * std::exp(-cp.a_h * r * r - cp.c_h * zt * zt);
      },
      Parity::even);
  return s;
}

ForcingFn ManufacturedCase::make_forcing(const GridPtr& grid) const {
  if (!has_forcing) return ForcingFn();
  const CoupledParams cp;
  const double zc = 0.5 * grid->z_len;
  const PhysicalParams ph = params;
  GridPtr g_ptr = grid;

  return [cp, zc, ph, g_ptr](double t, Tendency& tend) {
    const Grid& g = *g_ptr;
    const double gt = TimeFactor::g(t);
    const double gp = TimeFactor::gp(t);
    const double K = 8.0 * cp.a_psi + 2.0 * cp.c_psi;
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.r_nodes[i];
      const double r2 = r * r;
      for (int j = 0; j < g.n_z; ++j) {
        const double z = g.z_nodes[j];
        const double ztp = z - (zc + cp.dzc_psi);
        const double ztg = z - (zc + cp.dzc_g);
        const double zth = z - (zc + cp.dzc_h);

        const double e_psi = std::exp(-cp.a_psi * r2 - cp.c_psi * ztp * ztp);
        const double e_g = std::exp(-cp.a_g * r2 - cp.c_g * ztg * ztg);
        const double e_h = std::exp(-cp.a_h * r2 - cp.c_h * zth * zth);

        // velocity induced by the analytic stream function
        const double u_r = cp.A_psi * gt * 2.0 * cp.c_psi * ztp * r * e_psi;
        const double u_z = cp.A_psi * gt * (2.0 - 2.0 * cp.a_psi * r2) * e_psi;

        // Gamma equation
        const double dg_r = cp.A_g * gt * e_g * (2.0 * r - 2.0 * cp.a_g * r2 * r);
        const double dg_z = cp.A_g * gt * e_g * r2 * (-2.0 * cp.c_g * ztg);
        const double dg_t = cp.A_g * gp * r2 * e_g;
        const double f_gamma = dg_t + u_r * dg_r + u_z * dg_z;

        // Omega equation
        const double q = K - 4.0 * cp.a_psi * cp.a_psi * r2 - 4.0 * cp.c_psi * cp.c_psi * ztp * ztp;
        const double om_common = cp.A_psi * gt * e_psi;
        const double dom_r = om_common * (-2.0 * cp.a_psi * r * q - 8.0 * cp.a_psi * cp.a_psi * r);
        const double dom_z =
            om_common * (-2.0 * cp.c_psi * ztp * q - 8.0 * cp.c_psi * cp.c_psi * ztp);
        const double dom_t = cp.A_psi * gp * e_psi * q;
        const double h_star = cp.A_h * gt * e_h;
        const double dz_h2 = -4.0 * cp.c_h * zth * h_star * h_star;
        const double gamma_over_r2 = cp.A_g * gt * e_g;  // Gamma / r^2
        const double dz_g2_over_r4 = -4.0 * cp.c_g * ztg * gamma_over_r2 * gamma_over_r2;
        const double f_omega =
            dom_t + u_r * dom_r + u_z * dom_z + ph.mu0_inv * dz_h2 - dz_g2_over_r4;

        // H equation
        const double dh_r = -2.0 * cp.a_h * r * h_star;
        const double dh_z = -2.0 * cp.c_h * zth * h_star;
        const double dh_t = cp.A_h * gp * e_h;
        const double lap_h = h_star * (4.0 * cp.a_h * cp.a_h * r2 +
                                       4.0 * cp.c_h * cp.c_h * zth * zth - 8.0 * cp.a_h -
                                       2.0 * cp.c_h);
        const double f_h =
            dh_t + u_r * dh_r + u_z * dh_z - ph.nu * lap_h - ph.hall * 2.0 * h_star * dh_z;

        tend.d_gamma(i, j) += f_gamma;
        tend.d_omega(i, j) += f_omega;
        tend.d_big_h(i, j) += f_h;
      }
    }
  };
}

ManufacturedCase ManufacturedCase::get(const std::string& id) {
  ManufacturedCase c;
  c.id = id;
  if (id == "coupled_bumps") {
    c.params = PhysicalParams{1.0, 1.0, 1.0};
    c.has_forcing = true;
    return c;
  }
  if (id == "linear_h_kernel") {
    c.params = PhysicalParams{1.0, 0.0, 0.0};
    c.has_forcing = false;
    return c;
  }
  if (id == "zero") {
    c.params = PhysicalParams{1.0, 1.0, 1.0};
    c.has_forcing = false;
    return c;
  }
  throw std::invalid_argument("unknown manufactured case '" + id + "'");
}

namespace {

double sup_field_error(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  auto pa = a.values();
  auto pb = b.values();
  for (std::size_t k = 0; k < pa.size(); ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
  return m;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const std::string& case_id,
                                              const std::vector<int>& resolutions,
                                              double t_final, double cfl_safety) {
  if (resolutions.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k)
    if (resolutions[k] != 2 * resolutions[k - 1])
      throw std::invalid_argument("convergence_study: resolutions must double");

  const ManufacturedCase mc = ManufacturedCase::get(case_id);
  std::vector<ConvergenceRow> rows;
  for (int n : resolutions) {
    GridPtr grid = make_grid(n, n, 8.0, 16.0);
    const ForcingFn forcing = mc.make_forcing(grid);
    const ForcingFn* fptr = forcing ? &forcing : nullptr;

    State state = mc.exact_state(grid, 0.0);
    Stepper stepper(grid);
    while (state.t < t_final) {
      const double remaining = t_final - state.t;
      const double dt_raw = stepper.cfl(state, cfl_safety);
      const bool final_step = remaining <= dt_raw;
      stepper.step_inplace(state, final_step ? remaining : dt_raw, fptr);
      if (final_step) {
        state.t = t_final;
        break;
      }
    }

    const State exact = mc.exact_state(grid, t_final);
    ConvergenceRow row;
    row.n = n;
    row.h = std::max(grid->h_r, grid->h_z);
    row.error = std::max({sup_field_error(state.gamma, exact.gamma),
                          sup_field_error(state.omega, exact.omega),
                          sup_field_error(state.big_h, exact.big_h)});
    if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0)
      row.order = std::log2(rows.back().error / row.error);
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_convergence_csv: cannot open " + path);
  os << "n,h,error,order\n";
  for (const ConvergenceRow& r : rows)
    os << r.n << ',' << format_double(r.h) << ',' << format_double(r.error) << ','
       << format_double(r.order) << '\n';
}

SweepResult sweep(const RunConfig& base, const std::string& param, std::vector<double> values,
                  const std::string& out_dir) {
  if (param != "eps" && param != "nu")
    throw std::invalid_argument("sweep: param must be 'eps' or 'nu'");
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  for (double v : values) {
    if (param == "nu" && !(v > 0.0)) throw std::invalid_argument("sweep: nu values must be > 0");
    if (param == "eps" && !(v >= 0.0)) throw std::invalid_argument("sweep: eps values must be >= 0");
  }
  std::sort(values.begin(), values.end(), std::greater<double>());

  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  SweepResult result;
  result.param = param;
  for (double v : values) {
    RunConfig cfg = base;
    if (param == "eps")
      cfg.initial.eps = v;
    else
      cfg.physics.nu = v;

    SweepRow row;
    row.value = v;
    row.run_dir = out_dir.empty() ? "" : out_dir + "/run_" + param + "_" + format_double(v);
    RunControl control = cfg.control;
    control.out_dir = row.run_dir;
    try {
      const RunResult rr = run(cfg.make_grid_(), cfg.initial, cfg.physics, control);
      row.t_proxy = rr.verdict.t_proxy;
      row.reason = termination_name(rr.reason);
      row.e0 = rr.records.empty() ? 0.0 : rr.records.front().h3_u + rr.records.front().h3_h;
    } catch (const std::exception& e) {
      row.t_proxy = std::numeric_limits<double>::quiet_NaN();
      row.reason = std::string("error: ") + e.what();
    }
    result.rows.push_back(std::move(row));
  }

  // trend check down the descending-value rows: decreasing eps should not
  // decrease the proxy time; decreasing nu should not increase it
  bool any_failed = false;
  bool ok = true;
  bool all_equal = true;
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    if (!std::isfinite(result.rows[k].t_proxy)) any_failed = true;
    if (k > 0) {
      const double prev = result.rows[k - 1].t_proxy;
      const double cur = result.rows[k].t_proxy;
      if (cur != prev) all_equal = false;
      if (param == "eps" && cur < prev) ok = false;
      if (param == "nu" && cur > prev) ok = false;
    }
  }
  if (any_failed)
    result.monotonicity = "indeterminate (failed rows)";
  else if (result.rows.size() < 2)
    result.monotonicity = "trivially monotone (single row)";
  else if (all_equal)
    result.monotonicity = "plateau";
  else
    result.monotonicity = ok ? "monotone-consistent" : "violated";
  if (param == "nu" && result.rows.size() >= 2 && !any_failed)
    result.monotonicity += " (report-only)";
  return result;
}

void write_sweep_csv(const SweepResult& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  os << "param,value,t_proxy,reason,e0,run_dir\n";
  for (const SweepRow& r : s.rows)
    os << s.param << ',' << format_double(r.value) << ',' << format_double(r.t_proxy) << ','
       << r.reason << ',' << format_double(r.e0) << ',' << r.run_dir << '\n';
}

std::string fit_trend(const SweepResult& s) {
  if (s.rows.size() < 2) throw std::invalid_argument("fit_trend: need >= 2 rows");
  std::ostringstream os;
  os << "sweep parameter: " << s.param << "\n";
  os << "rows (descending value): value t_proxy reason\n";
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -std::numeric_limits<double>::infinity();
  for (const SweepRow& r : s.rows) {
    os << "  " << format_double(r.value) << "  " << format_double(r.t_proxy) << "  " << r.reason
       << "\n";
    if (std::isfinite(r.t_proxy)) {
      tmin = std::min(tmin, r.t_proxy);
      tmax = std::max(tmax, r.t_proxy);
    }
  }
  os << "monotonicity: " << s.monotonicity << "\n";
  os << "t_proxy range: [" << format_double(tmin) << ", " << format_double(tmax) << "]\n";
  os << "ratio table t_proxy(v_{k+1}) / t_proxy(v_k):\n";
  for (std::size_t k = 1; k < s.rows.size(); ++k) {
    const double a = s.rows[k - 1].t_proxy;
    const double b = s.rows[k].t_proxy;
    os << "  " << format_double(s.rows[k - 1].value) << " -> " << format_double(s.rows[k].value)
       << ": " << format_double(a != 0.0 ? b / a : std::numeric_limits<double>::quiet_NaN())
       << "\n";
  }
  os << "note: breakdown proxy times are discrete-run observables; analytic lifespan\n"
        "lower bounds describe a continuum object, so only the ordering trend is\n"
        "comparable here and no functional form is fitted.\n";
  return os.str();
}

}  // namespace axhm
