#pragma once

#include <cstdint>
#include <vector>

#include "symfac/bench.hpp"
#include "symfac/factor.hpp"
#include "symfac/grid.hpp"
#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Frequency-band and cutoff data for the bad-factor parametrix. lambda_bar
// confines the transverse band (lambda_bar^{-1} kT <= |xi'| <= lambda_bar kT),
// m bounds the conormal real part on that band, and the xi_1 window is
// |xi_1| <= gamma kT.
struct GammaData {
  double lambda_bar = 0;  // max(z_max, 1/z_min) over the unit sphere
  double z_min = 0, z_max = 0;
  double m = 0;          // max over the sphere of ||sym Re B||
  double m_guarded = 0;  // max(m, tol.m_min)
  double gamma = 0;      // lambda_bar * m_guarded
};

// Smooth window: 1 on |s| <= 1/4, 0 on |s| >= 1/2, monotone between.
double band_cutoff(double s);

GammaData gamma_bound(const SystemSpec& spec, const RVec& x, int sphere_count = 512,
                      const Tolerances& tol = {});

// Phase data of the kernel at one (x1, y1): the matrix phase is
// Phi_1(xi_1) = -c (xi_1 I - B) with c = (x1-y1)^2 / (2(T-y1)), the scalar
// phase is slope * xi_1 with slope = (x1-y1) - c, and Bb = B - ik(T-y1).
// The defining right-parametrix identity
//   (T-x1)^{-1} [Phi_1' + xi_1 I - B + ik(T-x1)] (T-y1)(xi_1 I - Bb)^{-1} = I
// holds for every x1, and its worst sampled defect is reported.
struct KernelPhase {
  double c = 0;
  double slope = 0;
  Mat B, Bb;
  Mat exp_icB;  // e^{icB}
  double identity_residual = 0;
};

KernelPhase kernel_phase(double x1, double y1, double k, double T, const Mat& B);
Mat phase_matrix(const KernelPhase& ph, double xi1);  // Phi_1(xi1)

struct KernelSample {
  double x1 = 0, y1 = 0, k = 0, T = 0;
  RVec xi_prime;
  Mat value;
  double method_a_norm = 0;  // direct matrix quadrature, spectral norm
  double method_b_norm = 0;  // eigen-split scalar quadratures, spectral norm
  double agreement = 0;      // relative dual-method defect (floored near zero)
  double bound_rhs = 0;      // (1 + k(x1-y1)^2)^{-1} T
};

// Everything xi_1-independent for one frozen (xi', k): eigenstructure of B
// and the cutoff window. eval() integrates the kernel two ways; the
// spectral-only path backs the operator-level probe.
struct FrozenKernel {
  double k = 0, T = 0, a_cap = 0;  // window |xi_1| <= a_cap = gamma k T
  RVec xi_prime;
  Mat B;
  std::vector<Complex> lambda;  // cluster eigenvalues of B
  std::vector<Mat> P;           // matching Riesz projections

  KernelSample eval(double x1, double y1, const Tolerances& tol = {}) const;
  Mat eval_spectral(double x1, double y1, bool with_phase, const Tolerances& tol = {}) const;
  Mat full_line_residue(double x1, double y1) const;  // uncut plain-phase kernel
};

FrozenKernel make_frozen_kernel(const PencilFactorization& fac, const GammaData& gd, double k,
                                double T, const RVec& xi_prime, const Tolerances& tol = {});

KernelSample kernel_Sk(double x1, double y1, const RVec& xi_prime, double k, double T,
                       const GammaData& gd, const PencilFactorization& fac,
                       const Tolerances& tol = {});

// Sweep: (x1, y1) on a pair_grid^2 lattice over [0, T/2]^2, xi' = kT * omega
// over sphere directions, for each k. Deterministic ordering (k, direction,
// x1, y1).
std::vector<KernelSample> kernel_sweep(const SystemSpec& spec, const RVec& x0,
                                       const std::vector<double>& k_list, double T, int pair_grid,
                                       int sphere_count, const Tolerances& tol = {});

struct KernelBoundReport {
  int m_hat = 1;
  double C_hat = 0;  // max |S'| / [(1+k(x1-y1)^2)^{-m_hat} T]
  std::vector<double> k_values;
  std::vector<double> C_per_k;
  double spread = 0;     // max / min of C_per_k
  bool growing = false;  // C_per_k strictly increasing in k
};

KernelBoundReport kernel_bound_check(const std::vector<KernelSample>& samples, int m_hat);

// (2 pi)^{-1} integral of 1/|xi_1| over a <= |xi_1| <= 2a; equals
// pi^{-1} log 2 for every a > 0.
double cutoff_tail_integral(double a, const Tolerances& tol = {});

struct ErrorProbeReport {
  double T = 0;
  std::vector<double> k_list;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> rho;  // [seed][k]
  double alpha = 0;                      // fitted decay exponent of rho ~ k^{-alpha}
  bool decreasing = false;               // strictly, for every seed
  bool regime_ok = true;                 // k >= T^{-3} for all k
  int min_band_bins = 0;                 // smallest per-k transverse band population
};

// Applies the discrete (T-x1)^{-1}[D_x1 - B(xi') + ik(T-x1)] to the kernel
// action on band-limited seeded fields; one transverse dimension.
ErrorProbeReport error_probe(const SystemSpec& spec, const RVec& x0, double T,
                             const std::vector<double>& k_list, int nt, int nx, double r,
                             const std::vector<std::uint64_t>& seeds, const Tolerances& tol = {});

struct AprioriResult {
  double lhs = 0;  // sum over |beta| <= 1 of T^{-1/2} (kT)^{1/2-|beta|} ||d^beta v||
  double rhs = 0;  // ||(D_t - G)v|| with the bad (default) or good factor
  double ratio = 0;
  bool good_part = false;
};

AprioriResult apriori_check(const SymbolTable& sym, const TestField& v, const Grid& g, double k,
                            bool good_part = false);

}  // namespace symfac
