#ifndef AXHM_STREAM_SOLVER_HPP
#define AXHM_STREAM_SOLVER_HPP

#include <memory>

#include "axhm/fields.hpp"

namespace axhm {

/// Direct solver for (Laplacian - 1/r^2) psi = -omega_theta with psi odd,
/// psi(r_max) = 0 and periodic z: real FFT along z, then one tridiagonal
/// radial solve per mode. Inverts exactly the discrete operator implemented
/// by laplacian_minus, so the residual is at rounding level.
///
/// Plans and scratch buffers are prepared once per grid; solve() reuses them
/// and is therefore not safe for concurrent calls on one instance. Distinct
/// instances are independent.
class StreamfunctionSolver {
 public:
  explicit StreamfunctionSolver(GridPtr grid);
  ~StreamfunctionSolver();

  StreamfunctionSolver(const StreamfunctionSolver&) = delete;
  StreamfunctionSolver& operator=(const StreamfunctionSolver&) = delete;
  StreamfunctionSolver(StreamfunctionSolver&&) noexcept;
  StreamfunctionSolver& operator=(StreamfunctionSolver&&) noexcept;

  ScalarField solve(const ScalarField& omega_theta);

  /// Allocation-free variant writing into a caller-owned field.
  void solve_into(const ScalarField& omega_theta, ScalarField& psi);

  /// Solves with the right-hand side r * omega_over_r (the omega_theta
  /// induced by a vorticity-over-r field), loading the transform buffer
  /// directly. psi must live on the solver grid.
  void solve_r_weighted_into(const ScalarField& omega_over_r, ScalarField& psi);

  const Grid& grid() const;

 private:
  void solve_loaded(const ScalarField& src_field, ScalarField& psi);

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper with a per-thread solver cache keyed by grid geometry.
ScalarField solve_streamfunction(const ScalarField& omega_theta);

}  // namespace axhm

#endif
