#ifndef AXHM_OPERATORS_HPP
#define AXHM_OPERATORS_HPP

#include <span>
#include <vector>

#include "axhm/fields.hpp"

namespace axhm {

enum class Axis { r, z };

/// Meridian (poloidal) velocity b = u_r e_r + u_z e_z.
struct MeridianVelocity {
  ScalarField u_r;  // odd
  ScalarField u_z;  // even
};

/// Components of curl(u) for an axisymmetric field.
struct VorticityTriple {
  ScalarField omega_r;      // odd
  ScalarField omega_theta;  // odd
  ScalarField omega_z;      // even
};

/// Second-order central difference. Radial parity flips, axial parity is
/// preserved. Uses the project ghost convention (parity at the axis,
/// Dirichlet zero at r_max, periodic z).
ScalarField partial_derivative(const ScalarField& f, Axis axis);

/// Compact three-point second difference along one axis. Parity preserved.
ScalarField second_derivative(const ScalarField& f, Axis axis);

/// (omega_r, omega_theta, omega_z) = curl(u_theta e_theta + b).
/// omega_z is evaluated as d_r u_theta + u_theta / r with cell-centered
/// division. Requires u_theta odd.
VorticityTriple curl_axisym(const ScalarField& u_theta, const MeridianVelocity& b);

/// d_r u_r + u_r/r + d_z u_z, discretized as (1/r) D_r(r u_r) + D_z u_z so
/// that it telescopes against velocity_from_stream.
ScalarField discrete_divergence(const MeridianVelocity& b);

/// (Laplacian - 1/r^2) on odd fields: the azimuthal component of the vector
/// Laplacian. Rejects even input. Pointwise truncation is O(h^2) except on
/// the axis row, where the (1/r) d_r term of odd data degrades to O(h); the
/// elliptic solve built on this operator still recovers solutions at second
/// order.
ScalarField laplacian_minus(const ScalarField& f);

/// (Laplacian + (2/r) d_r) on even fields; equals the radial part of the
/// five-dimensional Laplacian, d_rr + (3/r) d_r + d_zz. Rejects odd input.
ScalarField laplacian_plus(const ScalarField& f);

/// b = curl(psi_theta e_theta): u_r = -d_z psi, u_z = d_r psi + psi/r, the
/// latter discretized as (1/r_i) D_r(r psi) so the discrete divergence
/// cancels to rounding.
MeridianVelocity velocity_from_stream(const ScalarField& psi_theta);

/// Discrete H^order surrogate: sum over fields of sum_{|alpha| <= order} of
/// lp_norm(D^alpha f, 2)^2 with mixed central-difference derivatives.
/// Returns the squared norm. order <= 3.
double sobolev_norm(std::span<const ScalarField> fields, int order);
double sobolev_norm(std::initializer_list<const ScalarField*> fields, int order);

// Pointwise magnitude fields used by diagnostics and the lemma bench. All
// outputs are tagged even (magnitudes are reflection-symmetric).

/// |grad f| for a scalar: sqrt(f_r^2 + f_z^2).
ScalarField scalar_grad_magnitude(const ScalarField& f);

/// |grad^2 f| for a scalar, including the e_theta x e_theta curvature entry:
/// sqrt(f_rr^2 + 2 f_rz^2 + f_zz^2 + (f_r/r)^2).
ScalarField scalar_hessian_magnitude(const ScalarField& f);

/// |grad b| for a meridian field, including the u_r/r curvature entry.
ScalarField meridian_grad_magnitude(const MeridianVelocity& b);

/// Sup over nodes of the Frobenius norm of the full velocity gradient of
/// u = u_theta e_theta + b (meridian block, swirl derivatives, u_r/r and
/// u_theta/r curvature entries).
double grad_u_sup_norm(const ScalarField& u_theta, const MeridianVelocity& b);

}  // namespace axhm

#endif
