#ifndef AXHM_FIELDS_HPP
#define AXHM_FIELDS_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace axhm {

/// Reflection symmetry across the axis r = 0. Smooth axisymmetric fields are
/// either even (f(-r) = f(r), zero radial slope on the axis) or odd
/// (f(-r) = -f(r), zero axis limit).
enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline double parity_sign(Parity p) { return p == Parity::even ? 1.0 : -1.0; }

/// Truncated-cylinder mesh on the meridian half-plane. Radial nodes are
/// cell-centered, r_i = (i + 1/2) h_r, so r = 0 is never a sample point and
/// 1/r factors stay finite. The z direction is periodic with period z_len.
struct Grid {
  int n_r = 0;
  int n_z = 0;
  double r_max = 0.0;
  double z_len = 0.0;
  double h_r = 0.0;
  double h_z = 0.0;
  std::vector<double> r_nodes;  // r_i = (i + 1/2) h_r
  std::vector<double> z_nodes;  // z_j = j h_z

  bool same_geometry(const Grid& o) const {
    return n_r == o.n_r && n_z == o.n_z && r_max == o.r_max && z_len == o.z_len;
  }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a grid. Requires n_r, n_z >= 8 and positive extents.
GridPtr make_grid(int n_r, int n_z, double r_max, double z_len);

/// One axisymmetric scalar sampled on a Grid, tagged with its axis parity.
/// Row-major n_r x n_z storage, index (i, j) = radial, axial.
///
/// Ghost convention (used by every stencil in the project): radial index -1
/// reflects through the axis with the parity sign, radial index n_r is a
/// homogeneous Dirichlet ghost (fields are assumed decaying), z wraps
/// periodically.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(GridPtr grid, Parity parity)
      : grid_(std::move(grid)),
        parity_(parity),
        nz_(grid_->n_z),
        v_(static_cast<std::size_t>(grid_->n_r) * grid_->n_z, 0.0) {}

  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * nz_ + j]; }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * nz_ + j]; }

  /// Ghost-extended radial access: i may be -1 (parity reflection) or n_r
  /// (Dirichlet zero). j must be in range.
  double ghost_r(int i, int j) const {
    if (i == -1) return parity_sign(parity_) * (*this)(0, j);
    if (i == grid_->n_r) return 0.0;
    return (*this)(i, j);
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }
  int nr() const { return grid_->n_r; }
  int nz() const { return nz_; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }

  bool all_finite() const;
  double max_abs() const;

 private:
  GridPtr grid_;
  Parity parity_ = Parity::even;
  int nz_ = 0;
  std::vector<double> v_;
};

/// Sample f(r, z) at the grid nodes. The parity tag is recorded as given.
/// Throws if any sample is non-finite (message carries the node).
ScalarField field_from_fn(const GridPtr& grid,
                          const std::function<double(double, double)>& f,
                          Parity parity);

/// Discrete L^p norm of an axisymmetric scalar over R^3: midpoint quadrature
/// of (2 pi \int\int |f|^p r dr dz)^(1/p). p = infinity returns max |f|.
double lp_norm(const ScalarField& f, double p);

/// Sup over nodes of the Euclidean magnitude sqrt(f1^2 + f2^2); the L^inf
/// norm of a two-component field such as (omega_r, omega_z).
double pair_sup_norm(const ScalarField& f1, const ScalarField& f2);

// Small arithmetic helpers. All return fresh fields; parities follow the
// usual multiplication rules (r itself counts as odd).

ScalarField scaled(const ScalarField& f, double c);
ScalarField added(const ScalarField& a, const ScalarField& b, double cb = 1.0);
ScalarField multiplied(const ScalarField& a, const ScalarField& b);
ScalarField multiplied_by_r(const ScalarField& f);
ScalarField divided_by_r(const ScalarField& f);

}  // namespace axhm

#endif
