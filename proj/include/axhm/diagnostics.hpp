#ifndef AXHM_DIAGNOSTICS_HPP
#define AXHM_DIAGNOSTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "axhm/solver.hpp"

namespace axhm {

enum class TerminationReason { completed, cfl_floor, nonfinite, norm_cap, bootstrap_violated };

/// "completed", "cfl_floor", ...
std::string termination_name(TerminationReason r);

/// One time-stamped row of every tracked norm and bootstrap quantity. The
/// serialized CSV columns are exactly the fields below, in declaration order,
/// up to and including l6_J.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double linf_omega_rz = 0.0;     // sup |(omega_r, omega_z)|
  double linf_omega_theta = 0.0;
  double l2_H = 0.0;
  double l6_H = 0.0;
  double linf_H = 0.0;
  double l2_Omega = 0.0;
  double l6_Omega = 0.0;
  double l2_grad_H = 0.0;
  double l2_grad_dz_H = 0.0;
  double l1linf_dz_H_running = 0.0;  // trapezoid of sup |d_z H| over time
  double l2_h_theta = 0.0;
  double linf_h_theta = 0.0;
  double l2_grad_b = 0.0;
  double l6_grad_b = 0.0;
  double l2_energy = 0.0;  // |u|_L2^2 + |h_theta|_L2^2
  double h3_u = 0.0;       // H^3 surrogate of (u_r, u_theta, u_z)
  double h3_h = 0.0;       // H^3 surrogate of h_theta
  double bootstrap_q = 0.0;  // t * running sup of linf_omega_rz
  double linf_ur_over_r = 0.0;
  double linf_utheta_over_r = 0.0;
  double l2_J = 0.0;
  double l6_J = 0.0;

  // carried in memory for the running trapezoid; not a CSV column
  double linf_dz_H = 0.0;

  bool all_finite() const;
};

/// CSV column names, in the serialized order.
std::span<const char* const> diagnostics_columns();

/// Populate a record from a state. Running integrals continue from the
/// history (which holds strictly earlier records); dt is the step size that
/// produced this state (0 for the initial record).
DiagnosticsRecord record(const State& state, StreamfunctionSolver& solver,
                         std::span<const DiagnosticsRecord> history, double dt);

/// Current bootstrap quantity q(t) = t_last * max over history of
/// linf_omega_rz. The continuation criterion fails once q > 1.
double bootstrap_status(std::span<const DiagnosticsRecord> history);

struct BreakdownVerdict {
  double t_proxy = 0.0;
  TerminationReason reason = TerminationReason::completed;
};

/// Earliest trigger wins; t_proxy is the last recorded time before it.
/// trigger_index is the index of the record at which the condition fired
/// (history.size() when the run stopped between records, e.g. CFL floor).
BreakdownVerdict breakdown_time(std::span<const DiagnosticsRecord> history,
                                TerminationReason reason, std::size_t trigger_index);

/// Header plus one row per record; floats as shortest round-trip decimals,
/// "\n" newlines. Byte-identical for identical histories.
void write_csv(std::span<const DiagnosticsRecord> records, const std::string& path);

/// Parse a file produced by write_csv (testing and post-processing).
std::vector<DiagnosticsRecord> read_csv(const std::string& path);

}  // namespace axhm

#endif
