#ifndef AXHM_EXPERIMENTS_HPP
#define AXHM_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "axhm/config.hpp"
#include "axhm/run.hpp"

namespace axhm {

// ---------------------------------------------------------------------------
// Manufactured solutions

/// An analytic (Gamma*, Omega*, H*) trajectory with the matching source
/// terms. The velocity is induced by an analytic stream function, so Omega*
/// is exactly the vorticity the discrete elliptic solve should reproduce.
struct ManufacturedCase {
  std::string id;
  PhysicalParams params;
  bool has_forcing = false;

  /// Analytic fields at time t, sampled on the grid.
  State exact_state(const GridPtr& grid, double t) const;
  /// Source terms; empty function for forcing-free cases.
  ForcingFn make_forcing(const GridPtr& grid) const;

  /// "coupled_bumps", "linear_h_kernel" or "zero".
  static ManufacturedCase get(const std::string& id);
};

struct ConvergenceRow {
  int n = 0;          // n x n grid
  double h = 0.0;     // max(h_r, h_z)
  double error = 0.0; // sup error over the three fields at t_final
  double order = 0.0; // log2(e_prev / e_this); 0 for the first row
};

/// March the manufactured case on each resolution to t_final and tabulate
/// sup-norm errors and observed orders. Resolutions must each double the
/// previous one and there must be at least three of them.
std::vector<ConvergenceRow> convergence_study(const std::string& case_id,
                                              const std::vector<int>& resolutions,
                                              double t_final, double cfl_safety = 0.8);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepRow {
  double value = 0.0;
  double t_proxy = 0.0;
  std::string reason;   // termination reason, or "error: ..." for failed rows
  double e0 = 0.0;      // H^3 surrogate of the initial data
  std::string run_dir;
};

struct SweepResult {
  std::string param;  // "eps" or "nu"
  std::vector<SweepRow> rows;  // sorted by descending parameter value
  std::string monotonicity;    // verdict string
};

/// Run the base configuration once per parameter value, collect breakdown
/// verdicts, and judge the trend. Per-run outputs land in
/// out_dir/run_<param>_<value>/; failures become rows, never aborts.
SweepResult sweep(const RunConfig& base, const std::string& param,
                  std::vector<double> values, const std::string& out_dir);

void write_sweep_csv(const SweepResult& s, const std::string& path);

/// Textual trend summary: monotonicity verdicts, ranges, and the ratio table
/// of consecutive breakdown-proxy times. Needs at least two rows.
std::string fit_trend(const SweepResult& s);

}  // namespace axhm

#endif
