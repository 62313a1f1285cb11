#ifndef AXHM_SOLVER_HPP
#define AXHM_SOLVER_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "axhm/fields.hpp"
#include "axhm/operators.hpp"
#include "axhm/stream_solver.hpp"

namespace axhm {

/// Coefficients of the system. nu is the magnetic resistivity (diffusion of
/// H), hall scales the 2 H d_z H term, mu0_inv scales the -d_z H^2 Lorentz
/// source. nu = hall = mu0_inv = 1 is the normalized system; any of them may
/// be zeroed to isolate sub-dynamics.
struct PhysicalParams {
  double nu = 1.0;
  double hall = 1.0;
  double mu0_inv = 1.0;

  void validate() const;
};

/// Named analytic bump profiles for initial data, all even in r.
enum class Shape { gaussian, ring, zero };

struct BumpSpec {
  Shape shape = Shape::gaussian;
  double r_width = 1.0;
  double z_width = 1.0;
  double z_center = -1.0;  // negative = domain midpoint
};

double bump_eval(const BumpSpec& spec, double r, double z, double z_len);

/// Initial data: swirl size eps is the sup norm of curl(u_theta,0 e_theta);
/// the swirl amplitude is calibrated against the discrete curl so the
/// measured norm equals eps exactly (up to rounding).
struct InitialDataSpec {
  double eps = 1e-2;
  BumpSpec swirl_shape;
  BumpSpec h_shape;
  BumpSpec omega_shape;
  double h_amp = 1.0;
  double omega_amp = 1.0;
};

/// Evolved state: Gamma = r u_theta, Omega = omega_theta / r, H = h_theta / r,
/// all even, plus physical parameters and the clock.
struct State {
  double t = 0.0;
  ScalarField gamma;
  ScalarField omega;
  ScalarField big_h;
  PhysicalParams params;

  bool all_finite() const {
    return gamma.all_finite() && omega.all_finite() && big_h.all_finite();
  }
};

struct Tendency {
  ScalarField d_gamma;
  ScalarField d_omega;
  ScalarField d_big_h;
};

/// Optional forcing hook: adds source terms for time t into the tendency.
/// Used by the manufactured-solution study and the lemma bench only.
using ForcingFn = std::function<void(double t, Tendency& tend)>;

/// Raised when a tendency turns non-finite; the run loop converts it into a
/// breakdown verdict.
struct NonFiniteError : std::runtime_error {
  int i, j;
  NonFiniteError(int i_, int j_)
      : std::runtime_error("non-finite tendency at node (i=" + std::to_string(i_) +
                           ", j=" + std::to_string(j_) + ")"),
        i(i_),
        j(j_) {}
};

State init_state(const GridPtr& grid, const InitialDataSpec& spec, const PhysicalParams& params);

/// Meridian velocity induced by Omega: solve for psi from omega_theta = r Omega,
/// then b = curl(psi e_theta). Discretely divergence-free by construction.
MeridianVelocity reconstruct_velocity(const State& state, StreamfunctionSolver& solver);

/// Right-hand side of the reduced system:
///   d Gamma = -b . grad Gamma
///   d Omega = -b . grad Omega - mu0_inv d_z(H^2) + d_z(Gamma^2) / r^4
///   d H     = -b . grad H + nu (Lap + 2/r d_r) H + hall 2 H d_z H
Tendency compute_rhs(const State& state, StreamfunctionSolver& solver,
                     const ForcingFn* forcing = nullptr);

/// Advective/diffusive step-size bound:
///   dt = safety * min(h / max|b|, h_z / (2 hall max|H|), h_min^2 / (20 nu)).
double cfl_dt(const State& state, StreamfunctionSolver& solver, double safety);

/// One strong-stability-preserving RK3 step. All terms explicit. Gamma = 0 is
/// an exact fixed subspace (the zero tendency is reproduced bit-for-bit).
State step(const State& state, StreamfunctionSolver& solver, double dt,
           const ForcingFn* forcing = nullptr);

/// Binary checkpoint: magic "AXHM", version 1, grid descriptor, clock and
/// parameters, then Gamma, Omega, H as row-major little-endian f64 arrays.
/// Round-trips bit-exactly.
void checkpoint_save(const State& state, const std::string& path);
State checkpoint_load(const std::string& path);

/// Allocation-free stepping engine: owns the elliptic solver, scratch fields
/// and stage buffers, and fuses the stencil evaluations of one RK stage into
/// a single sweep. Implements exactly the same discretization as
/// compute_rhs/step above. One instance per simulation timeline.
class Stepper {
 public:
  explicit Stepper(GridPtr grid);

  /// Same bound as cfl_dt; the reconstructed velocity is cached and reused
  /// by the first stage of the following step_inplace on the same state.
  double cfl(const State& state, double safety);

  /// Advance the state by dt in place. Returns false when the updated fields
  /// are no longer finite (breakdown signal).
  bool step_inplace(State& state, double dt, const ForcingFn* forcing = nullptr);

  StreamfunctionSolver& stream_solver() { return solver_; }

 private:
  void velocity_for(const ScalarField& omega, double t_key);
  void stage(const State& base, const State& in, State& out, double t_stage, double dt,
             double ca, double cb, const ForcingFn* forcing, bool check_finite);

  GridPtr grid_;
  StreamfunctionSolver solver_;
  ScalarField omega_theta_, psi_, u_r_, u_z_;
  State sa_, sb_;
  Tendency forcing_buf_;
  bool forcing_buf_ready_ = false;
  const double* vel_key_ = nullptr;
  double vel_key_t_ = 0.0;
  bool vel_valid_ = false;
  bool last_finite_ = true;
};

}  // namespace axhm

#endif
