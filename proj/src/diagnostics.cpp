#include "axhm/diagnostics.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "axhm/csv.hpp"

namespace axhm {

std::string termination_name(TerminationReason r) {
  switch (r) {
    case TerminationReason::completed: return "completed";
    case TerminationReason::cfl_floor: return "cfl_floor";
    case TerminationReason::nonfinite: return "nonfinite";
    case TerminationReason::norm_cap: return "norm_cap";
    case TerminationReason::bootstrap_violated: return "bootstrap_violated";
  }
  return "unknown";
}

namespace {

constexpr std::array<const char*, 24> kColumns = {
    "t",
    "dt",
    "linf_omega_rz",
    "linf_omega_theta",
    "l2_H",
    "l6_H",
    "linf_H",
    "l2_Omega",
    "l6_Omega",
    "l2_grad_H",
    "l2_grad_dz_H",
    "l1linf_dz_H_running",
    "l2_h_theta",
    "linf_h_theta",
    "l2_grad_b",
    "l6_grad_b",
    "l2_energy",
    "h3_u",
    "h3_h",
    "bootstrap_q",
    "linf_ur_over_r",
    "linf_utheta_over_r",
    "l2_J",
    "l6_J",
};

std::array<double, 24> row_values(const DiagnosticsRecord& r) {
  return {r.t,
          r.dt,
          r.linf_omega_rz,
          r.linf_omega_theta,
          r.l2_H,
          r.l6_H,
          r.linf_H,
          r.l2_Omega,
          r.l6_Omega,
          r.l2_grad_H,
          r.l2_grad_dz_H,
          r.l1linf_dz_H_running,
          r.l2_h_theta,
          r.linf_h_theta,
          r.l2_grad_b,
          r.l6_grad_b,
          r.l2_energy,
          r.h3_u,
          r.h3_h,
          r.bootstrap_q,
          r.linf_ur_over_r,
          r.linf_utheta_over_r,
          r.l2_J,
          r.l6_J};
}

void assign_row(DiagnosticsRecord& r, const std::array<double, 24>& v) {
  r.t = v[0];
  r.dt = v[1];
  r.linf_omega_rz = v[2];
  r.linf_omega_theta = v[3];
  r.l2_H = v[4];
  r.l6_H = v[5];
  r.linf_H = v[6];
  r.l2_Omega = v[7];
  r.l6_Omega = v[8];
  r.l2_grad_H = v[9];
  r.l2_grad_dz_H = v[10];
  r.l1linf_dz_H_running = v[11];
  r.l2_h_theta = v[12];
  r.linf_h_theta = v[13];
  r.l2_grad_b = v[14];
  r.l6_grad_b = v[15];
  r.l2_energy = v[16];
  r.h3_u = v[17];
  r.h3_h = v[18];
  r.bootstrap_q = v[19];
  r.linf_ur_over_r = v[20];
  r.linf_utheta_over_r = v[21];
  r.l2_J = v[22];
  r.l6_J = v[23];
}

}  // namespace

bool DiagnosticsRecord::all_finite() const {
  for (double v : row_values(*this))
    if (!std::isfinite(v)) return false;
  return true;
}

std::span<const char* const> diagnostics_columns() { return kColumns; }

DiagnosticsRecord record(const State& state, StreamfunctionSolver& solver,
                         std::span<const DiagnosticsRecord> history, double dt) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.dt = dt;

  const ScalarField u_theta = divided_by_r(state.gamma);        // odd
  const ScalarField omega_theta = multiplied_by_r(state.omega); // odd
  const ScalarField h_theta = multiplied_by_r(state.big_h);     // odd
  const MeridianVelocity b = reconstruct_velocity(state, solver);

  MeridianVelocity zero_b{ScalarField(state.gamma.grid_ptr(), Parity::odd),
                          ScalarField(state.gamma.grid_ptr(), Parity::even)};
  const VorticityTriple w_swirl = curl_axisym(u_theta, zero_b);
  r.linf_omega_rz = pair_sup_norm(w_swirl.omega_r, w_swirl.omega_z);
  r.linf_omega_theta = omega_theta.max_abs();

  r.l2_H = lp_norm(state.big_h, 2.0);
  r.l6_H = lp_norm(state.big_h, 6.0);
  r.linf_H = state.big_h.max_abs();
  r.l2_Omega = lp_norm(state.omega, 2.0);
  r.l6_Omega = lp_norm(state.omega, 6.0);
  r.l2_grad_H = lp_norm(scalar_grad_magnitude(state.big_h), 2.0);

  const ScalarField dz_H = partial_derivative(state.big_h, Axis::z);
  r.l2_grad_dz_H = lp_norm(scalar_grad_magnitude(dz_H), 2.0);
  r.linf_dz_H = dz_H.max_abs();
  if (!history.empty()) {
    const DiagnosticsRecord& prev = history.back();
    r.l1linf_dz_H_running =
        prev.l1linf_dz_H_running + 0.5 * (r.t - prev.t) * (r.linf_dz_H + prev.linf_dz_H);
  }

  r.l2_h_theta = lp_norm(h_theta, 2.0);
  r.linf_h_theta = h_theta.max_abs();

  const ScalarField grad_b = meridian_grad_magnitude(b);
  r.l2_grad_b = lp_norm(grad_b, 2.0);
  r.l6_grad_b = lp_norm(grad_b, 6.0);

  const double l2_ur = lp_norm(b.u_r, 2.0);
  const double l2_ut = lp_norm(u_theta, 2.0);
  const double l2_uz = lp_norm(b.u_z, 2.0);
  r.l2_energy =
      l2_ur * l2_ur + l2_ut * l2_ut + l2_uz * l2_uz + r.l2_h_theta * r.l2_h_theta;

  r.h3_u = sobolev_norm({&b.u_r, &u_theta, &b.u_z}, 3);
  r.h3_h = sobolev_norm({&h_theta}, 3);

  double sup_rz = r.linf_omega_rz;
  for (const DiagnosticsRecord& h : history) sup_rz = std::max(sup_rz, h.linf_omega_rz);
  r.bootstrap_q = r.t * sup_rz;

  r.linf_ur_over_r = divided_by_r(b.u_r).max_abs();
  r.linf_utheta_over_r = divided_by_r(u_theta).max_abs();

  const ScalarField j_field = divided_by_r(w_swirl.omega_r);  // J = omega_r / r
  r.l2_J = lp_norm(j_field, 2.0);
  r.l6_J = lp_norm(j_field, 6.0);
  return r;
}

double bootstrap_status(std::span<const DiagnosticsRecord> history) {
  if (history.empty()) throw std::invalid_argument("bootstrap_status: empty history");
  double sup = 0.0;
  for (const DiagnosticsRecord& r : history) sup = std::max(sup, r.linf_omega_rz);
  return history.back().t * sup;
}

BreakdownVerdict breakdown_time(std::span<const DiagnosticsRecord> history,
                                TerminationReason reason, std::size_t trigger_index) {
  BreakdownVerdict v;
  v.reason = reason;
  if (history.empty()) {
    v.t_proxy = 0.0;
    return v;
  }
  if (reason == TerminationReason::completed) {
    v.t_proxy = history.back().t;
    return v;
  }
  const std::size_t last_good = trigger_index == 0 ? 0 : trigger_index - 1;
  v.t_proxy = history[std::min(last_good, history.size() - 1)].t;
  return v;
}

void write_csv(std::span<const DiagnosticsRecord> records, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (c) os << ',';
    os << kColumns[c];
  }
  os << '\n';
  for (const DiagnosticsRecord& r : records) {
    const auto vals = row_values(r);
    for (std::size_t c = 0; c < vals.size(); ++c) {
      if (c) os << ',';
      os << format_double(vals[c]);
    }
    os << '\n';
  }
  os.flush();
  if (!os) throw std::runtime_error("write_csv: write failed: " + path);
}

std::vector<DiagnosticsRecord> read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty file");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto parts = split_csv_line(line);
    if (parts.size() != kColumns.size())
      throw std::runtime_error("read_csv: wrong column count in " + path);
    std::array<double, 24> vals{};
    for (std::size_t c = 0; c < parts.size(); ++c) vals[c] = parse_double(parts[c]);
    DiagnosticsRecord r;
    assign_row(r, vals);
    out.push_back(r);
  }
  return out;
}

}  // namespace axhm
