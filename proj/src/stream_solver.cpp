#include "axhm/stream_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace axhm {

namespace {
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct StreamfunctionSolver::Impl {
  GridPtr grid;
  int n_r = 0, n_z = 0, n_modes = 0;
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;

  // Radial stencil of (Laplacian - 1/r^2); sub/superdiagonals are
  // mode-independent, the pivots absorb the per-mode z eigenvalue.
  std::vector<double> sub, sup;
  std::vector<double> w;      // [k * n_r + i] forward-elimination multipliers
  std::vector<double> invd;   // [k * n_r + i] inverted pivots

  explicit Impl(GridPtr g) : grid(std::move(g)) {
    n_r = grid->n_r;
    n_z = grid->n_z;
    n_modes = n_z / 2 + 1;

    rbuf = fftw_alloc_real(static_cast<std::size_t>(n_r) * n_z);
    cbuf = fftw_alloc_complex(static_cast<std::size_t>(n_r) * n_modes);
    {
      std::lock_guard<std::mutex> lock(fftw_plan_mutex());
      fwd = fftw_plan_many_dft_r2c(1, &n_z, n_r, rbuf, nullptr, 1, n_z, cbuf, nullptr, 1,
                                   n_modes, FFTW_ESTIMATE);
      bwd = fftw_plan_many_dft_c2r(1, &n_z, n_r, cbuf, nullptr, 1, n_modes, rbuf, nullptr, 1,
                                   n_z, FFTW_ESTIMATE);
    }
    if (!fwd || !bwd) throw std::runtime_error("StreamfunctionSolver: FFTW plan failed");

    const double hr = grid->h_r;
    const double hz = grid->h_z;
    const double irr = 1.0 / (hr * hr);
    std::vector<double> diag(n_r);
    sub.resize(n_r);
    sup.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
      const double r = grid->r_nodes[i];
      const double cfs = 1.0 / (2.0 * hr * r);
      sub[i] = irr - cfs;
      sup[i] = irr + cfs;
      diag[i] = -2.0 * irr - 1.0 / (r * r);
    }
    diag[0] -= sub[0];  // odd reflection at the axis: psi(-r_0) = -psi(r_0)

    // Factorizations stored i-major so the mode-blocked sweeps below walk
    // memory contiguously.
    w.assign(static_cast<std::size_t>(n_r) * n_modes, 0.0);
    invd.assign(static_cast<std::size_t>(n_r) * n_modes, 0.0);
    std::vector<double> lambda(n_modes);
    for (int k = 0; k < n_modes; ++k) {
      const double s = std::sin(M_PI * k / n_z);
      lambda[k] = 4.0 * s * s / (hz * hz);
      const double d0 = diag[0] - lambda[k];
      if (d0 == 0.0) throw std::runtime_error("StreamfunctionSolver: singular pivot");
      invd[k] = 1.0 / d0;
    }
    for (int i = 1; i < n_r; ++i) {
      double* wi = &w[static_cast<std::size_t>(i) * n_modes];
      double* di = &invd[static_cast<std::size_t>(i) * n_modes];
      const double* dprev = &invd[static_cast<std::size_t>(i - 1) * n_modes];
      for (int k = 0; k < n_modes; ++k) {
        wi[k] = sub[i] * dprev[k];
        const double d = (diag[i] - lambda[k]) - wi[k] * sup[i - 1];
        if (d == 0.0) throw std::runtime_error("StreamfunctionSolver: singular pivot");
        di[k] = 1.0 / d;
      }
    }
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
};

StreamfunctionSolver::StreamfunctionSolver(GridPtr grid) : impl_(std::make_unique<Impl>(std::move(grid))) {}
StreamfunctionSolver::~StreamfunctionSolver() = default;
StreamfunctionSolver::StreamfunctionSolver(StreamfunctionSolver&&) noexcept = default;
StreamfunctionSolver& StreamfunctionSolver::operator=(StreamfunctionSolver&&) noexcept = default;

const Grid& StreamfunctionSolver::grid() const { return *impl_->grid; }

ScalarField StreamfunctionSolver::solve(const ScalarField& omega_theta) {
  ScalarField psi(omega_theta.grid_ptr(), Parity::odd);
  solve_into(omega_theta, psi);
  return psi;
}

void StreamfunctionSolver::solve_into(const ScalarField& omega_theta, ScalarField& psi) {
  Impl& im = *impl_;
  if (omega_theta.parity() != Parity::odd)
    throw std::invalid_argument("StreamfunctionSolver: omega_theta must be odd");
  // Load -omega so the sweep solves (L - lambda) psi_hat = -omega_hat.
  auto src = omega_theta.values();
  for (std::size_t k = 0; k < src.size(); ++k) im.rbuf[k] = -src[k];
  solve_loaded(omega_theta, psi);
}

void StreamfunctionSolver::solve_r_weighted_into(const ScalarField& omega_over_r,
                                                 ScalarField& psi) {
  Impl& im = *impl_;
  const Grid& g = *im.grid;
  auto src = omega_over_r.values();
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r_nodes[i];
    const std::size_t off = static_cast<std::size_t>(i) * g.n_z;
    for (int j = 0; j < g.n_z; ++j) im.rbuf[off + j] = -(r * src[off + j]);
  }
  solve_loaded(omega_over_r, psi);
}

void StreamfunctionSolver::solve_loaded(const ScalarField& src_field, ScalarField& psi) {
  Impl& im = *impl_;
  if (!src_field.grid().same_geometry(*im.grid))
    throw std::invalid_argument("StreamfunctionSolver: grid mismatch");

  const int n_r = im.n_r, nm = im.n_modes;
  fftw_execute(im.fwd);

  // Thomas sweeps over r, blocked over modes for cache locality.
  for (int i = 1; i < n_r; ++i) {
    fftw_complex* row = im.cbuf + static_cast<std::size_t>(i) * nm;
    const fftw_complex* pre = row - nm;
    const double* wi = &im.w[static_cast<std::size_t>(i) * nm];
    for (int k = 0; k < nm; ++k) {
      row[k][0] -= wi[k] * pre[k][0];
      row[k][1] -= wi[k] * pre[k][1];
    }
  }
  {
    fftw_complex* last = im.cbuf + static_cast<std::size_t>(n_r - 1) * nm;
    const double* dl = &im.invd[static_cast<std::size_t>(n_r - 1) * nm];
    for (int k = 0; k < nm; ++k) {
      last[k][0] *= dl[k];
      last[k][1] *= dl[k];
    }
  }
  for (int i = n_r - 2; i >= 0; --i) {
    fftw_complex* row = im.cbuf + static_cast<std::size_t>(i) * nm;
    const fftw_complex* nxt = row + nm;
    const double* di = &im.invd[static_cast<std::size_t>(i) * nm];
    const double s = im.sup[i];
    for (int k = 0; k < nm; ++k) {
      row[k][0] = (row[k][0] - s * nxt[k][0]) * di[k];
      row[k][1] = (row[k][1] - s * nxt[k][1]) * di[k];
    }
  }

  fftw_execute(im.bwd);

  psi.set_parity(Parity::odd);
  auto dst = psi.values();
  const double scale = 1.0 / im.n_z;
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = scale * im.rbuf[k];
}

ScalarField solve_streamfunction(const ScalarField& omega_theta) {
  struct Entry {
    int n_r, n_z;
    double r_max, z_len;
    std::unique_ptr<StreamfunctionSolver> solver;
  };
  thread_local std::vector<Entry> cache;
  const Grid& g = omega_theta.grid();
  for (Entry& e : cache)
    if (e.n_r == g.n_r && e.n_z == g.n_z && e.r_max == g.r_max && e.z_len == g.z_len)
      return e.solver->solve(omega_theta);
  cache.push_back({g.n_r, g.n_z, g.r_max, g.z_len,
                   std::make_unique<StreamfunctionSolver>(omega_theta.grid_ptr())});
  return cache.back().solver->solve(omega_theta);
}

}  // namespace axhm
