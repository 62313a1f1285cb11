#include "axhm/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace axhm {

namespace {

inline int wrap_prev(int j, int nz) { return j == 0 ? nz - 1 : j - 1; }
inline int wrap_next(int j, int nz) { return j == nz - 1 ? 0 : j + 1; }

}  // namespace

ScalarField partial_derivative(const ScalarField& f, Axis axis) {
  const Grid& g = f.grid();
  if (axis == Axis::r) {
    ScalarField out(f.grid_ptr(), flip(f.parity()));
    const double c = 1.0 / (2.0 * g.h_r);
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_z; ++j)
        out(i, j) = c * (f.ghost_r(i + 1, j) - f.ghost_r(i - 1, j));
    return out;
  }
  ScalarField out(f.grid_ptr(), f.parity());
  const double c = 1.0 / (2.0 * g.h_z);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_z; ++j)
      out(i, j) = c * (f(i, wrap_next(j, g.n_z)) - f(i, wrap_prev(j, g.n_z)));
  return out;
}

ScalarField second_derivative(const ScalarField& f, Axis axis) {
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr(), f.parity());
  if (axis == Axis::r) {
    const double c = 1.0 / (g.h_r * g.h_r);
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_z; ++j)
        out(i, j) = c * (f.ghost_r(i + 1, j) - 2.0 * f(i, j) + f.ghost_r(i - 1, j));
    return out;
  }
  const double c = 1.0 / (g.h_z * g.h_z);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_z; ++j)
      out(i, j) = c * (f(i, wrap_next(j, g.n_z)) - 2.0 * f(i, j) + f(i, wrap_prev(j, g.n_z)));
  return out;
}

VorticityTriple curl_axisym(const ScalarField& u_theta, const MeridianVelocity& b) {
  if (u_theta.parity() != Parity::odd)
    throw std::invalid_argument("curl_axisym: u_theta must be odd");
  VorticityTriple w;
  w.omega_r = scaled(partial_derivative(u_theta, Axis::z), -1.0);
  w.omega_theta =
      added(partial_derivative(b.u_r, Axis::z), partial_derivative(b.u_z, Axis::r), -1.0);
  w.omega_z = added(partial_derivative(u_theta, Axis::r), divided_by_r(u_theta));
  return w;
}

ScalarField discrete_divergence(const MeridianVelocity& b) {
  const Grid& g = b.u_r.grid();
  const ScalarField rur = multiplied_by_r(b.u_r);  // even, Dirichlet outer ghost
  ScalarField out(b.u_r.grid_ptr(), Parity::even);
  const double cz = 1.0 / (2.0 * g.h_z);
  for (int i = 0; i < g.n_r; ++i) {
    const double cr = 1.0 / (2.0 * g.h_r * g.r_nodes[i]);
    for (int j = 0; j < g.n_z; ++j) {
      const double radial = cr * (rur.ghost_r(i + 1, j) - rur.ghost_r(i - 1, j));
      const double axial =
          cz * (b.u_z(i, wrap_next(j, g.n_z)) - b.u_z(i, wrap_prev(j, g.n_z)));
      out(i, j) = radial + axial;
    }
  }
  return out;
}

ScalarField laplacian_minus(const ScalarField& f) {
  if (f.parity() != Parity::odd)
    throw std::invalid_argument("laplacian_minus: defined on odd fields only");
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr(), Parity::odd);
  const double irr = 1.0 / (g.h_r * g.h_r);
  const double izz = 1.0 / (g.h_z * g.h_z);
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_nodes[i];
    const double cfs = 1.0 / (2.0 * g.h_r * r);
    const double ir2 = 1.0 / (r * r);
    for (int j = 0; j < g.n_z; ++j) {
      const double fm = f.ghost_r(i - 1, j);
      const double fp = f.ghost_r(i + 1, j);
      const double fc = f(i, j);
      const double radial = irr * (fp - 2.0 * fc + fm) + cfs * (fp - fm) - ir2 * fc;
      const double axial =
          izz * (f(i, wrap_next(j, g.n_z)) - 2.0 * fc + f(i, wrap_prev(j, g.n_z)));
      out(i, j) = radial + axial;
    }
  }
  return out;
}

ScalarField laplacian_plus(const ScalarField& f) {
  if (f.parity() != Parity::even)
    throw std::invalid_argument("laplacian_plus: defined on even fields only");
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr(), Parity::even);
  const double irr = 1.0 / (g.h_r * g.h_r);
  const double izz = 1.0 / (g.h_z * g.h_z);
  for (int i = 0; i < g.n_r; ++i) {
    const double cfs = 3.0 / (2.0 * g.h_r * g.r_nodes[i]);
    for (int j = 0; j < g.n_z; ++j) {
      const double fm = f.ghost_r(i - 1, j);
      const double fp = f.ghost_r(i + 1, j);
      const double fc = f(i, j);
      const double radial = irr * (fp - 2.0 * fc + fm) + cfs * (fp - fm);
      const double axial =
          izz * (f(i, wrap_next(j, g.n_z)) - 2.0 * fc + f(i, wrap_prev(j, g.n_z)));
      out(i, j) = radial + axial;
    }
  }
  return out;
}

MeridianVelocity velocity_from_stream(const ScalarField& psi_theta) {
  if (psi_theta.parity() != Parity::odd)
    throw std::invalid_argument("velocity_from_stream: psi_theta must be odd");
  const Grid& g = psi_theta.grid();
  MeridianVelocity b;
  b.u_r = scaled(partial_derivative(psi_theta, Axis::z), -1.0);

  const ScalarField w = multiplied_by_r(psi_theta);  // even
  b.u_z = ScalarField(psi_theta.grid_ptr(), Parity::even);
  for (int i = 0; i < g.n_r; ++i) {
    const double c = 1.0 / (2.0 * g.h_r * g.r_nodes[i]);
    for (int j = 0; j < g.n_z; ++j)
      b.u_z(i, j) = c * (w.ghost_r(i + 1, j) - w.ghost_r(i - 1, j));
  }
  return b;
}

double sobolev_norm(std::span<const ScalarField> fields, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("sobolev_norm: order must be in [0, 3]");
  double acc = 0.0;
  const Grid* g0 = fields.empty() ? nullptr : &fields[0].grid();
  for (const ScalarField& f : fields) {
    if (!f.grid().same_geometry(*g0))
      throw std::invalid_argument("sobolev_norm: fields on different grids");
    ScalarField dr = f;
    for (int a = 0; a <= order; ++a) {
      if (a > 0) dr = partial_derivative(dr, Axis::r);
      ScalarField dz = dr;
      for (int b = 0; a + b <= order; ++b) {
        if (b > 0) dz = partial_derivative(dz, Axis::z);
        const double n = lp_norm(dz, 2.0);
        acc += n * n;
      }
    }
  }
  return acc;
}

double sobolev_norm(std::initializer_list<const ScalarField*> fields, int order) {
  std::vector<ScalarField> v;
  v.reserve(fields.size());
  for (const ScalarField* f : fields) v.push_back(*f);
  return sobolev_norm(std::span<const ScalarField>(v), order);
}

namespace {

ScalarField magnitude_from_squares(const GridPtr& g, const std::vector<const ScalarField*>& parts,
                                   const std::vector<double>& weights) {
  ScalarField out(g, Parity::even);
  auto dst = out.values();
  for (std::size_t p = 0; p < parts.size(); ++p) {
    auto src = parts[p]->values();
    const double w = weights[p];
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k] * src[k];
  }
  for (double& x : dst) x = std::sqrt(x);
  return out;
}

}  // namespace

ScalarField scalar_grad_magnitude(const ScalarField& f) {
  const ScalarField fr = partial_derivative(f, Axis::r);
  const ScalarField fz = partial_derivative(f, Axis::z);
  return magnitude_from_squares(f.grid_ptr(), {&fr, &fz}, {1.0, 1.0});
}

ScalarField scalar_hessian_magnitude(const ScalarField& f) {
  const ScalarField fr = partial_derivative(f, Axis::r);
  const ScalarField frr = second_derivative(f, Axis::r);
  const ScalarField fzz = second_derivative(f, Axis::z);
  const ScalarField frz = partial_derivative(fr, Axis::z);
  const ScalarField fr_over_r = divided_by_r(fr);
  return magnitude_from_squares(f.grid_ptr(), {&frr, &frz, &fzz, &fr_over_r},
                                {1.0, 2.0, 1.0, 1.0});
}

ScalarField meridian_grad_magnitude(const MeridianVelocity& b) {
  const ScalarField urr = partial_derivative(b.u_r, Axis::r);
  const ScalarField urz = partial_derivative(b.u_r, Axis::z);
  const ScalarField uzr = partial_derivative(b.u_z, Axis::r);
  const ScalarField uzz = partial_derivative(b.u_z, Axis::z);
  const ScalarField ur_over_r = divided_by_r(b.u_r);
  return magnitude_from_squares(b.u_r.grid_ptr(), {&urr, &urz, &uzr, &uzz, &ur_over_r},
                                {1.0, 1.0, 1.0, 1.0, 1.0});
}

double grad_u_sup_norm(const ScalarField& u_theta, const MeridianVelocity& b) {
  const ScalarField mer = meridian_grad_magnitude(b);
  const ScalarField utr = partial_derivative(u_theta, Axis::r);
  const ScalarField utz = partial_derivative(u_theta, Axis::z);
  const ScalarField ut_over_r = divided_by_r(u_theta);
  double m2 = 0.0;
  auto a = mer.values();
  auto p1 = utr.values();
  auto p2 = utz.values();
  auto p3 = ut_over_r.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double s = a[k] * a[k] + p1[k] * p1[k] + p2[k] * p2[k] + p3[k] * p3[k];
    m2 = std::max(m2, s);
  }
  return std::sqrt(m2);
}

}  // namespace axhm
