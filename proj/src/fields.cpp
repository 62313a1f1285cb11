#include "axhm/fields.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace axhm {

GridPtr make_grid(int n_r, int n_z, double r_max, double z_len) {
  if (n_r < 8 || n_z < 8)
    throw std::invalid_argument("make_grid: need n_r, n_z >= 8, got " + std::to_string(n_r) +
                                " x " + std::to_string(n_z));
  if (!(r_max > 0.0) || !(z_len > 0.0))
    throw std::invalid_argument("make_grid: extents must be positive");

  auto g = std::make_shared<Grid>();
  g->n_r = n_r;
  g->n_z = n_z;
  g->r_max = r_max;
  g->z_len = z_len;
  g->h_r = r_max / n_r;
  g->h_z = z_len / n_z;
  g->r_nodes.resize(n_r);
  g->z_nodes.resize(n_z);
  for (int i = 0; i < n_r; ++i) g->r_nodes[i] = (i + 0.5) * g->h_r;
  for (int j = 0; j < n_z; ++j) g->z_nodes[j] = j * g->h_z;
  return g;
}

bool ScalarField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

ScalarField field_from_fn(const GridPtr& grid,
                          const std::function<double(double, double)>& f,
                          Parity parity) {
  ScalarField out(grid, parity);
  for (int i = 0; i < grid->n_r; ++i) {
    const double r = grid->r_nodes[i];
    for (int j = 0; j < grid->n_z; ++j) {
      const double v = f(r, grid->z_nodes[j]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "field_from_fn: non-finite sample at node (i=" << i << ", j=" << j
            << "), (r=" << r << ", z=" << grid->z_nodes[j] << ")";
        throw std::domain_error(msg.str());
      }
      out(i, j) = v;
    }
  }
  return out;
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();

  const Grid& g = f.grid();
  const double w = 2.0 * M_PI * g.h_r * g.h_z;
  double acc = 0.0;
  if (p == 2.0) {
    for (int i = 0; i < g.n_r; ++i) {
      double row = 0.0;
      for (int j = 0; j < g.n_z; ++j) {
        const double x = f(i, j);
        row += x * x;
      }
      acc += row * g.r_nodes[i];
    }
    return std::sqrt(acc * w);
  }
  for (int i = 0; i < g.n_r; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.n_z; ++j) row += std::pow(std::abs(f(i, j)), p);
    acc += row * g.r_nodes[i];
  }
  return std::pow(acc * w, 1.0 / p);
}

double pair_sup_norm(const ScalarField& f1, const ScalarField& f2) {
  double m2 = 0.0;
  auto a = f1.values();
  auto b = f2.values();
  for (std::size_t k = 0; k < a.size(); ++k) m2 = std::max(m2, a[k] * a[k] + b[k] * b[k]);
  return std::sqrt(m2);
}

ScalarField scaled(const ScalarField& f, double c) {
  ScalarField out(f.grid_ptr(), f.parity());
  auto src = f.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = c * src[k];
  return out;
}

ScalarField added(const ScalarField& a, const ScalarField& b, double cb) {
  ScalarField out(a.grid_ptr(), a.parity());
  auto pa = a.values();
  auto pb = b.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < pa.size(); ++k) dst[k] = pa[k] + cb * pb[k];
  return out;
}

ScalarField multiplied(const ScalarField& a, const ScalarField& b) {
  const Parity p = (a.parity() == b.parity()) ? Parity::even : Parity::odd;
  ScalarField out(a.grid_ptr(), p);
  auto pa = a.values();
  auto pb = b.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < pa.size(); ++k) dst[k] = pa[k] * pb[k];
  return out;
}

ScalarField multiplied_by_r(const ScalarField& f) {
  ScalarField out(f.grid_ptr(), flip(f.parity()));
  const Grid& g = f.grid();
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_z; ++j) out(i, j) = g.r_nodes[i] * f(i, j);
  return out;
}

ScalarField divided_by_r(const ScalarField& f) {
  ScalarField out(f.grid_ptr(), flip(f.parity()));
  const Grid& g = f.grid();
  for (int i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r_nodes[i];
    for (int j = 0; j < g.n_z; ++j) out(i, j) = inv_r * f(i, j);
  }
  return out;
}

}  // namespace axhm
