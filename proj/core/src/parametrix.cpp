#include "symfac/parametrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "symfac/audit.hpp"
#include "symfac/quadrature.hpp"
#include "symfac/sampling.hpp"
#include "symfac/symbol.hpp"

namespace symfac {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

double spec_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  return A.jacobiSvd().singularValues()(0);
}

// e^{y^2} erfc(y) for y >= 0; series tail keeps it finite where exp overflows.
double erfcx_pos(double y) {
  if (y < 5.0) return std::exp(y * y) * std::erfc(y);
  double inv = 1.0 / (2.0 * y * y);
  double term = 1.0, sum = 1.0;
  for (int j = 1; j < 60; ++j) {
    double next = term * (-(2.0 * j - 1.0) * inv);
    if (std::abs(next) >= std::abs(term)) break;
    sum += next;
    term = next;
    if (std::abs(next) < 1e-17 * std::abs(sum)) break;
  }
  return sum / (y * std::sqrt(kPi));
}

// integral over the whole line of e^{-u^2/(2 sigma^2)} / (u - i eps) du;
// odd kernel gives 0 at eps = 0, otherwise i pi sign(eps) erfcx(|eps|/(sqrt2 sigma)).
Complex gauss_pole_integral(double eps, double sigma) {
  if (eps == 0.0) return Complex(0.0, 0.0);
  double v = kPi * erfcx_pos(std::abs(eps) / (std::sqrt(2.0) * sigma));
  return Complex(0.0, eps > 0 ? v : -v);
}

void require_quad(const QuadResult& q, double scale, const char* what) {
  if (q.converged) return;
  if (q.error_estimate <= 1e-7 * std::max(scale, 1e-6)) return;
  throw Error(std::string(what) + " quadrature did not converge");
}

struct ScalarQuad {
  Complex value;
  double error_estimate = 0;
  bool converged = false;
};

void require_scalar(const ScalarQuad& q, const char* what) {
  if (q.converged) return;
  if (q.error_estimate <= 1e-7 * std::max(std::abs(q.value), 1e-6)) return;
  throw Error(std::string(what) + " quadrature did not converge");
}

ScalarQuad quad_scalar(const std::function<Complex(double)>& f, double lo, double hi,
                       double rel_tol, const std::vector<double>& hints) {
  auto wrap = [&f](double x) {
    Mat m(1, 1);
    m(0, 0) = f(x);
    return m;
  };
  QuadResult q = integrate_gk(wrap, lo, hi, rel_tol, 1e-12, 4000, hints);
  return {q.value(0, 0), q.error_estimate, q.converged};
}

void append_if_inside(std::vector<double>& hints, double v, double lo, double hi) {
  if (v > lo && v < hi) hints.push_back(v);
}

// Shifted scalar window integral: integral of eta((nu+u)/(2a)) e^{i b u} / (u - i eps) du.
// Near-axis poles under the window get a Gaussian subtraction with the closed-form
// addback; elsewhere the pole is at a safe distance and direct panels suffice.
Complex window_pole_integral(double a, double b, double nu, double eps, double rel_tol) {
  auto g = [a, b, nu](double u) {
    return band_cutoff((nu + u) / (2.0 * a)) * std::exp(kI * (b * u));
  };
  bool critical = std::abs(eps) <= 0.1 * a && std::abs(nu) < a;
  if (!critical) {
    double lo = -a - nu, hi = a - nu;
    std::vector<double> hints;
    append_if_inside(hints, 0.0, lo, hi);
    append_if_inside(hints, -0.5 * a - nu, lo, hi);
    append_if_inside(hints, 0.5 * a - nu, lo, hi);
    auto f = [&g, eps](double u) { return g(u) / Complex(u, -eps); };
    ScalarQuad q = quad_scalar(f, lo, hi, rel_tol, hints);
    require_scalar(q, "kernel window");
    return q.value;
  }
  double sigma = a / 3.0;
  double L = a + std::abs(nu) + 9.0 * sigma;
  Complex g0 = band_cutoff(nu / (2.0 * a));
  std::vector<double> hints;
  for (double v : {0.0, -0.5 * a - nu, 0.5 * a - nu, -a - nu, a - nu})
    append_if_inside(hints, v, -L, L);
  auto f = [&g, g0, sigma, eps](double u) {
    Complex num = g(u) - g0 * std::exp(-u * u / (2.0 * sigma * sigma));
    return num / Complex(u, -eps);
  };
  ScalarQuad q = quad_scalar(f, -L, L, rel_tol, hints);
  require_scalar(q, "kernel window");
  return q.value + g0 * gauss_pole_integral(eps, sigma);
}

double sphere_sym_extremes(const RMat& S, double* lo, double* hi) {
  RMat sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(sym);
  *lo = es.eigenvalues().minCoeff();
  *hi = es.eigenvalues().maxCoeff();
  return std::max(std::abs(*lo), std::abs(*hi));
}

}  // namespace

double band_cutoff(double s) { return smooth_step(2.0 - 4.0 * std::abs(s)); }

GammaData gamma_bound(const SystemSpec& spec, const RVec& x, int sphere_count,
                      const Tolerances& tol) {
  if (spec.n < 2) throw Error("gamma bound needs at least one transverse variable");
  if (sphere_count < 1) throw Error("gamma bound needs a positive sphere count");
  GammaData gd;
  gd.z_min = std::numeric_limits<double>::infinity();
  gd.z_max = 0.0;
  gd.m = 0.0;
  for (const RVec& omega : sphere_samples(spec.n - 1, sphere_count)) {
    PencilFactorization fac = factor_pencil(pencil_at(spec, x, omega, tol), tol);
    double lo = 0, hi = 0;
    sphere_sym_extremes(fac.Z, &lo, &hi);
    if (lo <= tol.pd) throw AssumptionError("degenerate conormal imaginary part on the sphere");
    gd.z_min = std::min(gd.z_min, lo);
    gd.z_max = std::max(gd.z_max, hi);
    double blo = 0, bhi = 0;
    gd.m = std::max(gd.m, sphere_sym_extremes(fac.B_R, &blo, &bhi));
  }
  gd.lambda_bar = std::max(gd.z_max, 1.0 / gd.z_min);
  gd.m_guarded = std::max(gd.m, tol.m_min);
  gd.gamma = gd.lambda_bar * gd.m_guarded;
  return gd;
}

KernelPhase kernel_phase(double x1, double y1, double k, double T, const Mat& B) {
  if (y1 >= T) throw Error("kernel phase needs y1 < T");
  KernelPhase ph;
  ph.c = (x1 - y1) * (x1 - y1) / (2.0 * (T - y1));
  ph.slope = (x1 - y1) - ph.c;
  ph.B = B;
  ph.Bb = B - kI * (k * (T - y1)) * Mat::Identity(B.rows(), B.cols());
  ph.exp_icB = (kI * ph.c * B).exp();
  // probe the defining identity at a few xi_1, including the near-resonant shift
  Mat I = Mat::Identity(B.rows(), B.cols());
  double cp = (x1 - y1) / (T - y1);
  double worst = 0.0;
  for (double xi1 : {0.0, 1.0, -1.0, k * (T - y1)}) {
    Mat bracket = cp * (-xi1 * I + B) + xi1 * I - B + kI * (k * (T - x1)) * I;
    Mat Minv = (T - y1) * (xi1 * I - ph.Bb).partialPivLu().solve(I);
    Mat defect = bracket * Minv / (T - x1) - I;
    worst = std::max(worst, defect.norm());
  }
  ph.identity_residual = worst;
  return ph;
}

Mat phase_matrix(const KernelPhase& ph, double xi1) {
  return -ph.c * (xi1 * Mat::Identity(ph.B.rows(), ph.B.cols()) - ph.B);
}

FrozenKernel make_frozen_kernel(const PencilFactorization& fac, const GammaData& gd, double k,
                                double T, const RVec& xi_prime, const Tolerances& tol) {
  if (k <= 0 || T <= 0) throw Error("frozen kernel needs k, T > 0");
  FrozenKernel fk;
  fk.k = k;
  fk.T = T;
  fk.a_cap = gd.gamma * k * T;
  fk.xi_prime = xi_prime;
  fk.B = fac.B;
  SpectralReport sr = eigen_structure(fac.B, tol);
  if (!sr.diagonalizable)
    throw Error("frozen kernel needs a diagonalizable conormal factor");
  for (const EigenCluster& cl : sr.clusters) {
    if (cl.lambda.imag() <= 0)
      throw AssumptionError("conormal spectrum must lie in the upper half-plane");
    fk.lambda.push_back(cl.lambda);
    fk.P.push_back(cl.P);
  }
  return fk;
}

KernelSample FrozenKernel::eval(double x1, double y1, const Tolerances& tol) const {
  if (y1 >= T) throw Error("kernel needs y1 < T");
  const int N = static_cast<int>(B.rows());
  KernelSample s;
  s.x1 = x1;
  s.y1 = y1;
  s.k = k;
  s.T = T;
  s.xi_prime = xi_prime;
  s.bound_rhs = T / (1.0 + k * (x1 - y1) * (x1 - y1));
  if (a_cap <= 0) {
    s.value = Mat::Zero(N, N);
    return s;
  }
  const double a = a_cap;
  const double ct = (x1 - y1) * (x1 - y1) / (2.0 * (T - y1));
  const double b = (x1 - y1) - ct;
  const double pref = (T - y1) / (2.0 * kPi);
  const Mat I = Mat::Identity(N, N);
  const Mat Bb = B - kI * (k * (T - y1)) * I;

  const int H = static_cast<int>(lambda.size());
  std::vector<Complex> lam_t(H);
  std::vector<bool> crit(H);
  bool any_crit = false;
  for (int h = 0; h < H; ++h) {
    lam_t[h] = lambda[h] - kI * (k * (T - y1));
    double nu = lam_t[h].real(), eps = lam_t[h].imag();
    crit[h] = std::abs(eps) <= 0.1 * a && std::abs(nu) < a;
    any_crit = any_crit || crit[h];
  }

  // method (a): matrix resolvent quadrature with Gaussian pole subtraction
  const double sigma_a = a / 2.0;
  const double L = any_crit ? 5.5 * a : a;
  std::vector<double> hints;
  for (double v : {-a, -0.5 * a, 0.5 * a, a}) append_if_inside(hints, v, -L, L);
  for (int h = 0; h < H; ++h) append_if_inside(hints, lam_t[h].real(), -L, L);
  std::vector<Complex> c_h(H, Complex(0, 0));
  for (int h = 0; h < H; ++h)
    if (crit[h])
      c_h[h] = band_cutoff(lam_t[h].real() / (2.0 * a)) * std::exp(kI * (b * lam_t[h].real()));
  auto fa = [&](double xi) {
    Mat val = (band_cutoff(xi / (2.0 * a)) * std::exp(kI * (b * xi))) *
              (xi * I - Bb).partialPivLu().solve(I);
    for (int h = 0; h < H; ++h) {
      if (!crit[h]) continue;
      double nu = lam_t[h].real();
      Complex gauss = c_h[h] * std::exp(-(xi - nu) * (xi - nu) / (2.0 * sigma_a * sigma_a));
      val -= gauss / (xi - lam_t[h]) * P[h];
    }
    return val;
  };
  QuadResult qa = integrate_gk(fa, -L, L, tol.quad, 1e-12, 4000, hints);
  require_quad(qa, qa.value.norm(), "kernel resolvent");
  Mat Ia = qa.value;
  for (int h = 0; h < H; ++h)
    if (crit[h]) Ia += c_h[h] * gauss_pole_integral(lam_t[h].imag(), sigma_a) * P[h];
  Mat value_a = pref * ((kI * ct * B).exp() * Ia).eval();

  // method (b): per-cluster scalar windows, no matrix exponential involved
  Mat value_b = Mat::Zero(N, N);
  for (int h = 0; h < H; ++h) {
    double nu = lam_t[h].real(), eps = lam_t[h].imag();
    Complex n_core = window_pole_integral(a, b, nu, eps, tol.quad);
    value_b += pref * std::exp(kI * (ct * lambda[h])) * std::exp(kI * (b * nu)) * n_core * P[h];
  }

  s.method_a_norm = spec_norm(value_a);
  s.method_b_norm = spec_norm(value_b);
  double floor = std::max(1e-6 * T, 1e-12);
  s.agreement =
      spec_norm(value_a - value_b) / std::max({s.method_a_norm, s.method_b_norm, floor});
  if (s.agreement > 1e-4)
    throw Error("kernel quadrature methods disagree beyond 1e-4; integral under-resolved");
  s.value = value_a;
  return s;
}

Mat FrozenKernel::eval_spectral(double x1, double y1, bool with_phase,
                                const Tolerances& tol) const {
  if (y1 >= T) throw Error("kernel needs y1 < T");
  const int N = static_cast<int>(B.rows());
  if (a_cap <= 0) return Mat::Zero(N, N);
  const double a = a_cap;
  const double ct = with_phase ? (x1 - y1) * (x1 - y1) / (2.0 * (T - y1)) : 0.0;
  const double b = (x1 - y1) - ct;
  const double pref = (T - y1) / (2.0 * kPi);
  Mat out = Mat::Zero(N, N);
  for (std::size_t h = 0; h < lambda.size(); ++h) {
    Complex lam_t = lambda[h] - kI * (k * (T - y1));
    Complex n_core = window_pole_integral(a, b, lam_t.real(), lam_t.imag(), tol.quad);
    Complex phase = with_phase ? std::exp(kI * (ct * lambda[h])) : Complex(1, 0);
    out += pref * phase * std::exp(kI * (b * lam_t.real())) * n_core * P[h];
  }
  return out;
}

Mat FrozenKernel::full_line_residue(double x1, double y1) const {
  const int N = static_cast<int>(B.rows());
  const double b = x1 - y1;
  Mat out = Mat::Zero(N, N);
  for (std::size_t h = 0; h < lambda.size(); ++h) {
    Complex lam_t = lambda[h] - kI * (k * (T - y1));
    double eps = lam_t.imag();
    Complex kappa(0, 0);
    if (eps > 0) {
      if (b > 0)
        kappa = kI * std::exp(kI * (b * lam_t));
      else if (b == 0)
        kappa = kI * 0.5;
    } else if (eps < 0) {
      if (b < 0)
        kappa = -kI * std::exp(kI * (b * lam_t));
      else if (b == 0)
        kappa = -kI * 0.5;
    } else if (b != 0) {
      kappa = kI * 0.5 * (b > 0 ? 1.0 : -1.0) * std::exp(kI * (b * lam_t.real()));
    }
    out += kappa * P[h];
  }
  return (T - y1) * out;
}

KernelSample kernel_Sk(double x1, double y1, const RVec& xi_prime, double k, double T,
                       const GammaData& gd, const PencilFactorization& fac,
                       const Tolerances& tol) {
  return make_frozen_kernel(fac, gd, k, T, xi_prime, tol).eval(x1, y1, tol);
}

std::vector<KernelSample> kernel_sweep(const SystemSpec& spec, const RVec& x0,
                                       const std::vector<double>& k_list, double T, int pair_grid,
                                       int sphere_count, const Tolerances& tol) {
  if (T <= 0) throw Error("kernel sweep needs T > 0");
  if (pair_grid < 1) throw Error("kernel sweep needs a nonempty pair grid");
  GammaData gd = gamma_bound(spec, x0, 512, tol);
  std::vector<RVec> dirs = sphere_samples(spec.n - 1, sphere_count);
  std::vector<double> pts(pair_grid);
  for (int i = 0; i < pair_grid; ++i)
    pts[i] = pair_grid == 1 ? 0.0 : 0.5 * T * i / (pair_grid - 1);
  std::vector<KernelSample> samples;
  samples.reserve(k_list.size() * dirs.size() * pts.size() * pts.size());
  for (double k : k_list) {
    for (const RVec& dir : dirs) {
      RVec xi_prime = k * T * dir;
      PencilFactorization fac = factor_pencil(pencil_at(spec, x0, xi_prime, tol), tol);
      FrozenKernel fk = make_frozen_kernel(fac, gd, k, T, xi_prime, tol);
      for (double x1 : pts)
        for (double y1 : pts) samples.push_back(fk.eval(x1, y1, tol));
    }
  }
  return samples;
}

KernelBoundReport kernel_bound_check(const std::vector<KernelSample>& samples, int m_hat) {
  if (m_hat != 1 && m_hat != 2) throw Error("decay order must be 1 or 2");
  if (samples.empty()) throw Error("kernel bound check needs samples");
  KernelBoundReport rep;
  rep.m_hat = m_hat;
  std::map<double, double> per_k;
  for (const KernelSample& s : samples) {
    double decay = std::pow(1.0 + s.k * (s.x1 - s.y1) * (s.x1 - s.y1), -m_hat) * s.T;
    double ratio = s.method_a_norm / decay;
    auto [it, fresh] = per_k.try_emplace(s.k, ratio);
    if (!fresh) it->second = std::max(it->second, ratio);
  }
  rep.C_hat = 0.0;
  for (const auto& [k, c] : per_k) {
    rep.k_values.push_back(k);
    rep.C_per_k.push_back(c);
    rep.C_hat = std::max(rep.C_hat, c);
  }
  double lo = *std::min_element(rep.C_per_k.begin(), rep.C_per_k.end());
  rep.spread = lo > 0 ? rep.C_hat / lo : std::numeric_limits<double>::infinity();
  rep.growing = rep.C_per_k.size() > 1;
  for (std::size_t i = 0; i + 1 < rep.C_per_k.size(); ++i)
    if (rep.C_per_k[i + 1] <= rep.C_per_k[i]) rep.growing = false;
  return rep;
}

double cutoff_tail_integral(double a, const Tolerances& tol) {
  if (a <= 0) throw Error("cutoff tail needs a > 0");
  auto f = [](double xi) { return Complex(1.0 / std::abs(xi), 0.0); };
  Complex left = integrate_gk_scalar(f, -2.0 * a, -a, tol.quad, 1e-14);
  Complex right = integrate_gk_scalar(f, a, 2.0 * a, tol.quad, 1e-14);
  return (left.real() + right.real()) / (2.0 * kPi);
}

ErrorProbeReport error_probe(const SystemSpec& spec, const RVec& x0, double T,
                             const std::vector<double>& k_list, int nt, int nx, double r,
                             const std::vector<std::uint64_t>& seeds, const Tolerances& tol) {
  if (T <= 0 || r <= 0) throw Error("probe needs T, r > 0");
  if (nt < 8 || nx < 4) throw Error("probe grid too small");
  if (k_list.empty() || seeds.empty()) throw Error("probe needs k values and seeds");
  const int N = spec.N;
  ErrorProbeReport rep;
  rep.T = T;
  rep.k_list = k_list;
  rep.seeds = seeds;
  rep.regime_ok = true;
  for (double k : k_list) {
    if (k <= 0) throw Error("probe needs k > 0");
    if (k < 1.0 / (T * T * T) * (1.0 - 1e-12)) rep.regime_ok = false;
  }

  GammaData gd = gamma_bound(spec, x0, 512, tol);
  const double R = 2.0 * r;
  const double h = 0.5 * T / nt;
  RVec t(nt);
  for (int i = 0; i < nt; ++i) t(i) = (i + 0.5) * h;
  RVec freq(nx);
  for (int j = 0; j < nx; ++j) {
    int m = j <= nx / 2 ? j : j - nx;
    freq(j) = kPi * m / R;
  }

  // per (k, bin in band): frozen kernel matrices, reused across seeds
  struct BinKernel {
    int bin = 0;
    Mat B;
    Mat K;  // (nt N) x (nt N) action of the composite kernel
  };
  std::vector<std::vector<BinKernel>> kernels(k_list.size());
  rep.min_band_bins = nx;
  std::map<int, PencilFactorization> fac_cache;
  for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
    double k = k_list[ki];
    // lambda_bar collapses to 1 for isotropic Z; pad so the band holds bins
    double lam = std::max(gd.lambda_bar, 1.2);
    double band_lo = k * T / lam;
    double band_hi = lam * k * T;
    for (int j = 0; j < nx; ++j) {
      double f = std::abs(freq(j));
      if (f < band_lo || f > band_hi) continue;
      auto it = fac_cache.find(j);
      if (it == fac_cache.end()) {
        RVec xi_prime = RVec::Zero(spec.n - 1);
        xi_prime(0) = freq(j);
        it = fac_cache
                 .emplace(j, factor_pencil(pencil_at(spec, x0, xi_prime, tol), tol))
                 .first;
      }
      RVec xi_prime = RVec::Zero(spec.n - 1);
      xi_prime(0) = freq(j);
      FrozenKernel fk = make_frozen_kernel(it->second, gd, k, T, xi_prime, tol);
      BinKernel bk;
      bk.bin = j;
      bk.B = fk.B;
      bk.K.resize(nt * N, nt * N);
      for (int iy = 0; iy < nt; ++iy) {
        for (int ix = 0; ix < nt; ++ix) {
          Mat S = fk.eval_spectral(t(ix), t(iy), true, tol) + fk.full_line_residue(t(ix), t(iy)) -
                  fk.eval_spectral(t(ix), t(iy), false, tol);
          bk.K.block(ix * N, iy * N, N, N) = S;
        }
      }
      kernels[ki].push_back(std::move(bk));
    }
    if (kernels[ki].empty())
      throw Error("probe band holds no transverse bins; raise the transverse resolution");
    rep.min_band_bins = std::min(rep.min_band_bins, static_cast<int>(kernels[ki].size()));
  }

  RVec env(nt);
  for (int i = 0; i < nt; ++i) env(i) = bump_profile(4.0 * t(i) / T - 1.0);

  rep.rho.assign(seeds.size(), std::vector<double>(k_list.size(), 0.0));
  std::vector<double> log_k, log_rho;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    // the draw order is fixed over all bins so the field is k-independent
    std::mt19937_64 rng(seeds[si]);
    auto uni = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    Mat ghat(nt * N, nx);
    for (int j = 0; j < nx; ++j) {
      for (int c = 0; c < N; ++c) {
        Complex amp(2.0 * uni() - 1.0, 2.0 * uni() - 1.0);
        double wt = uni() * 8.0 * kPi / T;
        for (int i = 0; i < nt; ++i)
          ghat(i * N + c, j) = env(i) * amp * std::exp(kI * (wt * t(i)));
      }
    }
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
      double k = k_list[ki];
      double num = 0.0, den = 0.0;
      for (const BinKernel& bk : kernels[ki]) {
        CVec g = ghat.col(bk.bin);
        CVec u = h * (bk.K * g);
        // discrete (T-x1)^{-1} [D - B + ik(T-x1)] applied along the t axis
        CVec w(nt * N);
        CVec col(nt), dcol(nt);
        Mat du(nt, N);
        for (int c = 0; c < N; ++c) {
          for (int i = 0; i < nt; ++i) col(i) = u(i * N + c);
          fd_derivative(h, col, dcol, 1);
          du.col(c) = dcol;
        }
        for (int i = 0; i < nt; ++i) {
          CVec ui(N), di(N);
          for (int c = 0; c < N; ++c) {
            ui(c) = u(i * N + c);
            di(c) = du(i, c);
          }
          CVec wi = (-kI * di - bk.B * ui + kI * (k * (T - t(i))) * ui) / (T - t(i));
          for (int c = 0; c < N; ++c) w(i * N + c) = wi(c) - g(i * N + c);
        }
        num += w.squaredNorm();
        den += g.squaredNorm();
      }
      if (den <= 0) throw Error("probe battery vanished on the band");
      double rho = std::sqrt(num / den);
      rep.rho[si][ki] = rho;
      if (rho > 0) {
        log_k.push_back(std::log(k));
        log_rho.push_back(std::log(rho));
      }
    }
  }

  rep.decreasing = true;
  for (const auto& curve : rep.rho)
    for (std::size_t j = 0; j + 1 < curve.size(); ++j)
      if (curve[j + 1] >= curve[j]) rep.decreasing = false;

  // pooled least squares of log rho against log k
  if (log_k.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_k.size(); ++i) {
      mx += log_k[i];
      my += log_rho[i];
    }
    mx /= log_k.size();
    my /= log_k.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_k.size(); ++i) {
      sxx += (log_k[i] - mx) * (log_k[i] - mx);
      sxy += (log_k[i] - mx) * (log_rho[i] - my);
    }
    rep.alpha = sxx > 0 ? -sxy / sxx : 0.0;
  }
  return rep;
}

AprioriResult apriori_check(const SymbolTable& sym, const TestField& v, const Grid& g, double k,
                            bool good_part) {
  if (k <= 0) throw Error("apriori check needs k > 0");
  if (v.N != sym.N) throw Error("field and symbol table dimensions differ");
  const int N = v.N;
  AprioriResult res;
  res.good_part = good_part;
  double cell = g.dt * g.dx;

  double v2 = 0;
  for (int c = 0; c < N; ++c) v2 += v.comp[c].squaredNorm();
  if (v2 == 0) return res;

  std::vector<Mat> vhat(N), what(N);
  std::vector<Mat> dvhat(N);
  for (int c = 0; c < N; ++c) {
    vhat[c] = fft_rows(v.comp[c]);
    dvhat[c] = -kI * dt_field(g, vhat[c], 1);
    what[c].resize(g.nt, g.nx);
  }
  for (int j = 0; j < g.nx; ++j) {
    Mat M;
    if (good_part)
      M = sym.Y[j].cast<Complex>() + kI * sym.Z[j].cast<Complex>();
    else
      M = sym.Y[j].transpose().cast<Complex>() - kI * sym.Z[j].cast<Complex>();
    for (int i = 0; i < g.nt; ++i) {
      CVec vv(N), dv(N);
      for (int c = 0; c < N; ++c) {
        vv(c) = vhat[c](i, j);
        dv(c) = dvhat[c](i, j);
      }
      CVec ww = dv - M * vv + kI * (k * (g.t(i) - g.T)) * vv;
      for (int c = 0; c < N; ++c) what[c](i, j) = ww(c);
    }
  }
  double rhs2 = 0;
  for (int c = 0; c < N; ++c) rhs2 += ifft_rows(what[c]).squaredNorm();
  res.rhs = std::sqrt(cell * rhs2);

  double dt2 = 0, dx2 = 0;
  for (int c = 0; c < N; ++c) {
    dt2 += dt_field(g, v.comp[c], 1).squaredNorm();
    dx2 += dx_field(g, v.comp[c], 1).squaredNorm();
  }
  double kT = k * g.T;
  res.lhs = (std::sqrt(kT * cell * v2) + (std::sqrt(cell * dt2) + std::sqrt(cell * dx2)) /
                                             std::sqrt(kT)) /
            std::sqrt(g.T);
  if (res.rhs <= 0) throw Error("factor annihilated a nonzero field");
  res.ratio = res.lhs / res.rhs;
  return res;
}

}  // namespace symfac
