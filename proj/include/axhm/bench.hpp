#ifndef AXHM_BENCH_HPP
#define AXHM_BENCH_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "axhm/fields.hpp"

namespace axhm {

/// Families of smooth, decaying analytic sample fields. Parameters are drawn
/// from the seed independently of any grid, so the same sample can be
/// evaluated at several resolutions.
enum class FamilyKind { gaussian_bumps, random_bandlimited, vortex_rings };

struct SampleFamily {
  FamilyKind kind = FamilyKind::gaussian_bumps;
  int count = 16;
  std::uint64_t seed = 1;
  double r_width_min = 0.7;
  double r_width_max = 1.6;
  double z_width_min = 0.7;
  double z_width_max = 1.6;
  double z_center_halfspan = 2.0;  // centers drawn in z_len/2 +- halfspan
};

struct AnalyticSample {
  std::string id;
  std::function<double(double, double)> fn;  // even in r, smooth, decaying
};

/// Deterministic sample set for the standard domain (r_max, z_len).
std::vector<AnalyticSample> make_samples(const SampleFamily& family, double r_max, double z_len);

/// Measured-constant report for one functional inequality. Ratios are
/// LHS/RHS per sample at the fine resolution; stability is the relative
/// change of max_ratio between the two resolutions (for the resistivity
/// scaling check it is instead the max/min spread of the per-nu constants,
/// see the note field).
struct RatioReport {
  std::string lemma_id;
  std::vector<std::string> sample_ids;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio_coarse = 0.0;
  int res_coarse = 0;
  int res_fine = 0;
  double stability = 0.0;
  int skipped = 0;
  std::string note;
};

/// One Gagliardo-Nirenberg instance |grad^j f|_p <= C |grad^m f|_r^alpha |f|_q^(1-alpha).
/// Exponents may be INFINITY. Supported derivative orders: j, m <= 2.
struct GnExponents {
  int j = 0;
  int m = 1;
  double p = 6.0;
  double q = 2.0;
  double r_exp = 2.0;
  double alpha = 1.0;
};

/// Checks the exponent relation 1/p = j/3 + alpha (1/r - m/3) + (1-alpha)/q
/// and rejects the lemma's excluded cases, then measures the ratio over the
/// family at both resolutions.
RatioReport verify_gn(const SampleFamily& family, const GnExponents& e, int n_coarse = 128,
                      int n_fine = 256);

/// |grad b|_p / |omega_theta|_p with b recovered through the stream-function
/// solve. At p = 2 the ratio is an identity up to O(h^2).
RatioReport verify_biot_savart(const SampleFamily& family, double p, int n_coarse = 128,
                               int n_fine = 256);

/// |grad(u_r / r)|_p / |Omega|_p.
RatioReport verify_grad_ur_over_r(const SampleFamily& family, double p, int n_coarse = 128,
                                  int n_fine = 256);

/// Maximal space-time regularity of the diffusion path: integrate
/// v_t = (Lap + 2/r d_r) v + f from v = 0 and measure
/// |grad^2 v|_{L2(0,T;L2)} / |f|_{L2(0,T;L2)}. Only q = p = 2 is benched;
/// stability is measured across a dt halving at fixed resolution.
RatioReport verify_heat_maxreg(const SampleFamily& family, double q, double p, double T,
                               int n = 128);

/// Resistivity scaling of the diffusion path: for v_t = nu Lap v + g measure
/// C(nu) = |grad^2 v|_{L2L2} / (sqrt(T) |grad^2 v0|_L2 + nu^-1 |g|_{L2L2})
/// and report the spread of C over the nu list (stability field).
RatioReport verify_nu_scaling(const SampleFamily& family, const std::vector<double>& nus,
                              double T, int n = 128);

/// Space-time norms of one diffusion run v_t = nu (Lap + 2/r d_r) v + phi(t) S
/// from v(0) = v0, accumulated by the trapezoid rule at every step. The
/// primitive behind the two heat benches.
struct HeatRunNorms {
  double hess_l2l2 = 0.0;   // |grad^2 v|_{L2(0,T;L2)}
  double force_l2l2 = 0.0;  // |phi S|_{L2(0,T;L2)}
};
HeatRunNorms heat_march(const GridPtr& grid, const ScalarField& v0, const ScalarField& S,
                        const std::function<double(double)>& phi, double nu, double T,
                        double dt_scale = 1.0);

/// CSV rows (lemma id, sample id, ratio) for all reports.
void write_bench_csv(std::span<const RatioReport> reports, const std::string& path);

/// Human-readable block: one paragraph per report.
std::string render_bench_summary(std::span<const RatioReport> reports);

}  // namespace axhm

#endif
