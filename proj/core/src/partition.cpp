#include "symfac/partition.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace symfac {

namespace {

// smooth_step(u) = a/(a+b) with a = e^{-1/u}, b = e^{-1/(1-u)}; the
// derivatives below use a' = a/u^2, b' = -b/(1-u)^2 and vanish with all
// orders at both ends.
double step_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  double iu2 = 1.0 / (u * u), iv2 = 1.0 / ((1.0 - u) * (1.0 - u));
  double D = a + b;
  return a * b * (iu2 + iv2) / (D * D);
}

double step_d2(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  double iu2 = 1.0 / (u * u), iv2 = 1.0 / ((1.0 - u) * (1.0 - u));
  double D = a + b;
  double W = a * b * (iu2 + iv2);
  double Wp = a * b * (1.0 - 2.0 * u) * (iu2 * iu2 + iv2 * iv2);
  double Dp = a * iu2 - b * iv2;
  return (Wp * D - 2.0 * W * Dp) / (D * D * D);
}

struct AxisCutoff {
  std::vector<double> v, d1, d2;  // theta_0 and scaled derivatives on a window
};

// theta_0(mu s - g) along one axis with analytic derivatives in s.
AxisCutoff axis_cutoff(const RVec& s, int first, int last, double mu, int g) {
  AxisCutoff ax;
  int m = last - first + 1;
  ax.v.resize(m);
  ax.d1.resize(m);
  ax.d2.resize(m);
  for (int i = 0; i < m; ++i) {
    double u = mu * s(first + i) - g;
    ax.v[i] = base_cutoff(u);
    ax.d1[i] = mu * base_cutoff_d1(u);
    ax.d2[i] = mu * mu * base_cutoff_d2(u);
  }
  return ax;
}

void window_range(const RVec& s, double mu, int g, int* first, int* last) {
  *first = -1;
  *last = -2;
  for (int i = 0; i < s.size(); ++i) {
    if (std::abs(mu * s(i) - g) < 1.5) {
      if (*first < 0) *first = i;
      *last = i;
    }
  }
}

double field_norm(const Mat& f, double cell) { return std::sqrt(cell * f.squaredNorm()); }

}  // namespace

double base_cutoff(double t) { return smooth_step(3.0 - 2.0 * std::abs(t)); }

double base_cutoff_d1(double t) {
  if (t == 0.0) return 0.0;
  double sgn = t > 0 ? 1.0 : -1.0;
  return -2.0 * sgn * step_d1(3.0 - 2.0 * std::abs(t));
}

double base_cutoff_d2(double t) { return 4.0 * step_d2(3.0 - 2.0 * std::abs(t)); }

PartitionFamily eta_family(double mu, const Grid& g) {
  if (mu < 1.0) throw Error("partition scale needs mu >= 1");
  if (1.0 / (mu * g.dt) < 8.0 - 1e-9 || 1.0 / (mu * g.dx) < 8.0 - 1e-9)
    throw Error("grid does not resolve the partition scale with 8 cells");

  PartitionFamily fam;
  fam.mu = mu;
  fam.nt = g.nt;
  fam.nx = g.nx;

  int lo1 = static_cast<int>(std::ceil(mu * g.t(0) - 1.5));
  int hi1 = static_cast<int>(std::floor(mu * g.t(g.nt - 1) + 1.5));
  int lo2 = static_cast<int>(std::ceil(mu * g.x(0) - 1.5));
  int hi2 = static_cast<int>(std::floor(mu * g.x(g.nx - 1) + 1.5));

  struct RawMember {
    int g1, g2, i0, i1, j0, j1;
    AxisCutoff t_ax, x_ax;
  };
  std::vector<RawMember> raw;
  for (int g1 = lo1; g1 <= hi1; ++g1) {
    int i0 = 0, i1 = -1;
    window_range(g.t, mu, g1, &i0, &i1);
    if (i1 < i0) continue;
    AxisCutoff t_ax = axis_cutoff(g.t, i0, i1, mu, g1);
    for (int g2 = lo2; g2 <= hi2; ++g2) {
      int j0 = 0, j1 = -1;
      window_range(g.x, mu, g2, &j0, &j1);
      if (j1 < j0) continue;
      raw.push_back({g1, g2, i0, i1, j0, j1, t_ax, axis_cutoff(g.x, j0, j1, mu, g2)});
    }
  }
  if (raw.empty()) throw Error("no partition members meet the grid");

  // lattice sum and its analytic derivatives
  RMat bar = RMat::Zero(g.nt, g.nx), bar_t = bar, bar_x = bar, bar_tt = bar, bar_tx = bar,
       bar_xx = bar;
  Eigen::MatrixXi active = Eigen::MatrixXi::Zero(g.nt, g.nx);
  fam.c1 = 0;
  for (const RawMember& rm : raw) {
    for (int i = rm.i0; i <= rm.i1; ++i) {
      int it = i - rm.i0;
      for (int j = rm.j0; j <= rm.j1; ++j) {
        int jx = j - rm.j0;
        double v = rm.t_ax.v[it] * rm.x_ax.v[jx];
        double vt = rm.t_ax.d1[it] * rm.x_ax.v[jx];
        double vx = rm.t_ax.v[it] * rm.x_ax.d1[jx];
        double vtt = rm.t_ax.d2[it] * rm.x_ax.v[jx];
        double vtx = rm.t_ax.d1[it] * rm.x_ax.d1[jx];
        double vxx = rm.t_ax.v[it] * rm.x_ax.d2[jx];
        bar(i, j) += v;
        bar_t(i, j) += vt;
        bar_x(i, j) += vx;
        bar_tt(i, j) += vtt;
        bar_tx(i, j) += vtx;
        bar_xx(i, j) += vxx;
        if (v > 0) active(i, j) += 1;
        double c = std::max({std::abs(v), std::abs(vt) / mu, std::abs(vx) / mu,
                             std::abs(vtt) / (mu * mu), std::abs(vtx) / (mu * mu),
                             std::abs(vxx) / (mu * mu)});
        fam.c1 = std::max(fam.c1, c);
      }
    }
  }
  fam.theta_bar = bar;
  fam.theta_bar_min = bar.minCoeff();
  if (fam.theta_bar_min < 1.0 - 1e-9)
    throw Error("partition lattice sum dropped below 1; member enumeration is incomplete");
  fam.max_active = active.maxCoeff();

  fam.c2 = 0;
  for (int i = 0; i < g.nt; ++i)
    for (int j = 0; j < g.nx; ++j)
      fam.c2 = std::max(fam.c2, std::max({std::abs(bar(i, j)), std::abs(bar_t(i, j)) / mu,
                                          std::abs(bar_x(i, j)) / mu,
                                          std::abs(bar_tt(i, j)) / (mu * mu),
                                          std::abs(bar_tx(i, j)) / (mu * mu),
                                          std::abs(bar_xx(i, j)) / (mu * mu)}));

  // normalized members and their quotient-rule derivatives
  RMat eta_sum = RMat::Zero(g.nt, g.nx);
  fam.c3 = 0;
  fam.members.reserve(raw.size());
  for (const RawMember& rm : raw) {
    PartitionMember m;
    m.g1 = rm.g1;
    m.g2 = rm.g2;
    m.t_center = rm.g1 / mu;
    m.x_center = rm.g2 / mu;
    m.i0 = rm.i0;
    m.i1 = rm.i1;
    m.j0 = rm.j0;
    m.j1 = rm.j1;
    m.eta.resize(rm.i1 - rm.i0 + 1, rm.j1 - rm.j0 + 1);
    for (int i = rm.i0; i <= rm.i1; ++i) {
      int it = i - rm.i0;
      for (int j = rm.j0; j <= rm.j1; ++j) {
        int jx = j - rm.j0;
        double p = rm.t_ax.v[it] * rm.x_ax.v[jx];
        double pt = rm.t_ax.d1[it] * rm.x_ax.v[jx];
        double px = rm.t_ax.v[it] * rm.x_ax.d1[jx];
        double ptt = rm.t_ax.d2[it] * rm.x_ax.v[jx];
        double ptx = rm.t_ax.d1[it] * rm.x_ax.d1[jx];
        double pxx = rm.t_ax.v[it] * rm.x_ax.d2[jx];
        double q = bar(i, j), qt = bar_t(i, j), qx = bar_x(i, j);
        double qtt = bar_tt(i, j), qtx = bar_tx(i, j), qxx = bar_xx(i, j);
        double e = p / q;
        double et = pt / q - p * qt / (q * q);
        double ex = px / q - p * qx / (q * q);
        double ett = ptt / q - 2 * pt * qt / (q * q) - p * qtt / (q * q) +
                     2 * p * qt * qt / (q * q * q);
        double etx = ptx / q - pt * qx / (q * q) - px * qt / (q * q) - p * qtx / (q * q) +
                     2 * p * qt * qx / (q * q * q);
        double exx = pxx / q - 2 * px * qx / (q * q) - p * qxx / (q * q) +
                     2 * p * qx * qx / (q * q * q);
        m.eta(it, jx) = e;
        eta_sum(i, j) += e;
        double c = std::max({std::abs(e), std::abs(et) / mu, std::abs(ex) / mu,
                             std::abs(ett) / (mu * mu), std::abs(etx) / (mu * mu),
                             std::abs(exx) / (mu * mu)});
        fam.c3 = std::max(fam.c3, c);
      }
    }
    fam.members.push_back(std::move(m));
  }
  fam.sum_defect = (eta_sum.array() - 1.0).abs().maxCoeff();

  fam.support_neighbors = 0;
  for (const PartitionMember& a : fam.members) {
    int count = 0;
    for (const PartitionMember& b : fam.members)
      if (std::abs(a.g1 - b.g1) <= 2 && std::abs(a.g2 - b.g2) <= 2) ++count;
    fam.support_neighbors = std::max(fam.support_neighbors, count);
  }
  return fam;
}

FrozenProbeReport frozen_error_probe(const SystemSpec& spec, const TestField& v, double mu,
                                     const Grid& g, const Tolerances& tol) {
  if (spec.kind != SystemKind::Tensor) throw Error("frozen probe needs tensor coefficients");
  if (spec.n != 2) throw Error("frozen probe runs on the two-variable slab realization");
  if (v.N != spec.N) throw Error("field and system dimensions differ");
  const int N = spec.N;
  const double cell = g.dt * g.dx;

  PartitionFamily fam = eta_family(mu, g);
  CoefficientField coef = sample_coefficients(spec, g);
  TestField Lv = apply_operator(coef, v, g);

  std::vector<Mat> vt(N), vx(N), vtt(N), vtx(N), vxx(N);
  for (int c = 0; c < N; ++c) {
    vt[c] = dt_field(g, v.comp[c], 1);
    vx[c] = dx_field(g, v.comp[c], 1);
    vtt[c] = dd_field(g, v.comp[c], 0, 0);
    vtx[c] = dd_field(g, v.comp[c], 0, 1);
    vxx[c] = dd_field(g, v.comp[c], 1, 1);
  }

  RVec e0 = RVec::Zero(2), e1 = RVec::Zero(2);
  e0(0) = 1;
  e1(1) = 1;

  FrozenProbeReport rep;
  rep.mu = mu;
  rep.k_induced = 2.0 * fam.c2 * mu * mu;

  auto idx = [N](int a, int b, int p, int q) { return ((a * N + b) * 2 + p) * 2 + q; };

  for (const PartitionMember& m : fam.members) {
    // cutoff times field, extended by zero
    std::vector<Mat> w(N);
    double wnorm2 = 0;
    for (int c = 0; c < N; ++c) {
      w[c] = Mat::Zero(g.nt, g.nx);
      for (int i = m.i0; i <= m.i1; ++i)
        for (int j = m.j0; j <= m.j1; ++j)
          w[c](i, j) = m.eta(i - m.i0, j - m.j0) * v.comp[c](i, j);
      wnorm2 += w[c].squaredNorm();
    }
    if (wnorm2 <= 0) continue;

    std::vector<Mat> wtt(N), wtx(N), wxx(N);
    for (int c = 0; c < N; ++c) {
      wtt[c] = dd_field(g, w[c], 0, 0);
      wtx[c] = dd_field(g, w[c], 0, 1);
      wxx[c] = dd_field(g, w[c], 1, 1);
    }

    RVec xg(2);
    xg(0) = m.t_center;
    xg(1) = m.x_center;
    RMat C00 = contract(spec, xg, e0, e0);
    RMat C01 = contract(spec, xg, e0, e1);
    RMat C10 = contract(spec, xg, e1, e0);
    RMat C11 = contract(spec, xg, e1, e1);

    double ef2 = 0, ec2 = 0, et2 = 0;
    for (int a = 0; a < N; ++a) {
      Mat Lw = Mat::Zero(g.nt, g.nx);
      Mat Lgw = Mat::Zero(g.nt, g.nx);
      for (int b = 0; b < N; ++b) {
        Mat mixed = coef.c[idx(a, b, 0, 1)] + coef.c[idx(a, b, 1, 0)];
        Lw += coef.c[idx(a, b, 0, 0)].cast<Complex>().cwiseProduct(wtt[b]) +
              mixed.cast<Complex>().cwiseProduct(wtx[b]) +
              coef.c[idx(a, b, 1, 1)].cast<Complex>().cwiseProduct(wxx[b]);
        Lgw += C00(a, b) * wtt[b] + (C01(a, b) + C10(a, b)) * wtx[b] + C11(a, b) * wxx[b];
      }
      Mat etaLv = Mat::Zero(g.nt, g.nx);
      for (int i = m.i0; i <= m.i1; ++i)
        for (int j = m.j0; j <= m.j1; ++j)
          etaLv(i, j) = m.eta(i - m.i0, j - m.j0) * Lv.comp[a](i, j);
      ef2 += (Lw - Lgw).squaredNorm();
      ec2 += (etaLv - Lw).squaredNorm();
      et2 += (etaLv - Lgw).squaredNorm();
    }

    // majorant over the doubled cube
    double m0 = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < g.nt; ++i) {
      if (std::abs(g.t(i) - m.t_center) > 2.0 / mu) continue;
      for (int j = 0; j < g.nx; ++j) {
        if (std::abs(g.x(j) - m.x_center) > 2.0 / mu) continue;
        for (int c = 0; c < N; ++c) {
          m0 += std::norm(v.comp[c](i, j));
          m1 += std::norm(vt[c](i, j)) + std::norm(vx[c](i, j));
          m2 += std::norm(vtt[c](i, j)) + 2.0 * std::norm(vtx[c](i, j)) +
                std::norm(vxx[c](i, j));
        }
      }
    }
    CubeError ce;
    ce.g1 = m.g1;
    ce.g2 = m.g2;
    ce.e_frozen = std::sqrt(cell * ef2);
    ce.e_comm = std::sqrt(cell * ec2);
    ce.e_total = std::sqrt(cell * et2);
    ce.majorant = std::sqrt(cell * m2) / mu + mu * std::sqrt(cell * m1) +
                  mu * mu * std::sqrt(cell * m0);
    rep.cubes.push_back(ce);
    if (ce.majorant > 0) {
      rep.max_ratio = std::max(rep.max_ratio, ce.e_total / ce.majorant);
      rep.max_frozen_ratio = std::max(rep.max_frozen_ratio, ce.e_frozen / ce.majorant);
      rep.max_comm_ratio = std::max(rep.max_comm_ratio, ce.e_comm / ce.majorant);
    }
  }
  if (rep.cubes.empty()) throw Error("no active cubes meet the field support");
  (void)tol;
  return rep;
}

}  // namespace symfac
