#include "axhm/run.hpp"

#include <cmath>
#include <filesystem>

namespace axhm {

namespace {

/// Appends a record and evaluates the breakdown conditions on it. Returns
/// true when the run must stop; fills reason/trigger.
bool record_and_check(const State& state, StreamfunctionSolver& solver, double dt,
                      std::vector<DiagnosticsRecord>& records, double norm_cap,
                      const RunObserver* observer, TerminationReason& reason,
                      std::size_t& trigger_index) {
  DiagnosticsRecord rec = record(state, solver, records, dt);
  if (!rec.all_finite()) {
    reason = TerminationReason::nonfinite;
    trigger_index = records.size();
    return true;
  }
  records.push_back(rec);
  if (observer && *observer) (*observer)(state, rec);
  if (rec.h3_u + rec.h3_h > norm_cap) {
    reason = TerminationReason::norm_cap;
    trigger_index = records.size() - 1;
    return true;
  }
  if (rec.bootstrap_q > 1.0) {
    reason = TerminationReason::bootstrap_violated;
    trigger_index = records.size() - 1;
    return true;
  }
  return false;
}

}  // namespace

RunResult run_from_state(State state, const RunControl& control, const RunObserver* observer,
                         const ForcingFn* forcing) {
  if (!control.out_dir.empty()) std::filesystem::create_directories(control.out_dir);

  Stepper stepper(state.gamma.grid_ptr());
  StreamfunctionSolver& solver = stepper.stream_solver();
  RunResult result;
  TerminationReason reason = TerminationReason::completed;
  std::size_t trigger_index = 0;

  bool stopped = record_and_check(state, solver, 0.0, result.records, control.norm_cap,
                                  observer, reason, trigger_index);

  long steps = 0;
  while (!stopped && state.t < control.t_end) {
    const double dt_raw = stepper.cfl(state, control.cfl_safety);
    if (dt_raw < control.dt_min) {
      reason = TerminationReason::cfl_floor;
      trigger_index = result.records.size();
      break;
    }
    const double remaining = control.t_end - state.t;
    const bool final_step = remaining <= dt_raw;
    const double dt = final_step ? remaining : dt_raw;

    bool finite = true;
    try {
      finite = stepper.step_inplace(state, dt, forcing);
    } catch (const NonFiniteError&) {
      finite = false;
    }
    ++steps;
    if (final_step) state.t = control.t_end;
    if (!finite) {
      reason = TerminationReason::nonfinite;
      trigger_index = result.records.size();
      break;
    }

    if (steps % control.record_every == 0 || final_step) {
      stopped = record_and_check(state, solver, dt, result.records, control.norm_cap, observer,
                                 reason, trigger_index);
    }
    if (!stopped && control.checkpoint_every > 0 && steps % control.checkpoint_every == 0 &&
        !control.out_dir.empty()) {
      checkpoint_save(state,
                      control.out_dir + "/checkpoint_step" + std::to_string(steps) + ".axhm");
    }
    if (final_step) break;
  }

  result.final_state = std::move(state);
  result.reason = reason;
  result.verdict = breakdown_time(result.records, reason, trigger_index);
  result.steps = steps;

  if (!control.out_dir.empty()) {
    write_csv(result.records, control.out_dir + "/diagnostics.csv");
    checkpoint_save(result.final_state, control.out_dir + "/final.axhm");
  }
  return result;
}

RunResult run(const GridPtr& grid, const InitialDataSpec& spec, const PhysicalParams& params,
              const RunControl& control, const RunObserver* observer, const ForcingFn* forcing) {
  return run_from_state(init_state(grid, spec, params), control, observer, forcing);
}

}  // namespace axhm
