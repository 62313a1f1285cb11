#ifndef AXHM_RUN_HPP
#define AXHM_RUN_HPP

#include <functional>
#include <string>
#include <vector>

#include "axhm/diagnostics.hpp"
#include "axhm/solver.hpp"

namespace axhm {

struct RunControl {
  double t_end = 1.0;
  double cfl_safety = 1.0;  // the dt formula already carries the stencil margin
  double dt_min = 1e-9;
  int record_every = 100;       // steps between diagnostics records
  double norm_cap = 1e6;        // breakdown once h3_u + h3_h exceeds this
  int checkpoint_every = 0;     // steps; 0 disables periodic checkpoints
  std::string out_dir;          // empty: no file output
};

struct RunResult {
  State final_state;
  std::vector<DiagnosticsRecord> records;
  TerminationReason reason = TerminationReason::completed;
  BreakdownVerdict verdict;
  long steps = 0;
};

/// Called after each appended record; lets callers track quantities that are
/// not CSV columns without touching the schema.
using RunObserver = std::function<void(const State&, const DiagnosticsRecord&)>;

/// Step until t_end or a breakdown signal (CFL floor, non-finite value, norm
/// cap, bootstrap violation). Breakdown ends the run with a reason code, not
/// an exception. When out_dir is set, writes diagnostics.csv and a final
/// checkpoint there.
RunResult run(const GridPtr& grid, const InitialDataSpec& spec, const PhysicalParams& params,
              const RunControl& control, const RunObserver* observer = nullptr,
              const ForcingFn* forcing = nullptr);

/// Same loop starting from an existing state (checkpoint resume).
RunResult run_from_state(State state, const RunControl& control,
                         const RunObserver* observer = nullptr,
                         const ForcingFn* forcing = nullptr);

}  // namespace axhm

#endif
