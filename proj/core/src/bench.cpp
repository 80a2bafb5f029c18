#include "symfac/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "symfac/expr.hpp"

namespace symfac {

WeightField carleman_weight(const Grid& g, double k, double T) {
  if (k <= 0) throw Error("carleman weight needs k > 0");
  WeightField w;
  w.log_w2 = RVec(g.nt);
  for (int i = 0; i < g.nt; ++i) {
    double d = g.t(i) - T;
    w.log_w2(i) = k * d * d;
  }
  double top = w.log_w2.maxCoeff();
  w.linear_ok = top <= 600.0;
  w.w2 = RVec(g.nt);
  double shift = w.linear_ok ? 0.0 : top;
  for (int i = 0; i < g.nt; ++i) w.w2(i) = std::exp(w.log_w2(i) - shift);
  return w;
}

SymbolTable freeze_symbol(const SystemSpec& spec, const RVec& x0, const Grid& g,
                          const Tolerances& tol, bool with_factors) {
  SymbolTable table;
  table.N = spec.N;
  table.H1.resize(g.nx);
  table.H2.resize(g.nx);
  table.Y.resize(g.nx);
  table.Z.resize(g.nx);
  double wmax = g.freq.cwiseAbs().maxCoeff();
  for (int j = 0; j < g.nx; ++j) {
    double w = g.freq(j);
    RVec xi_prime = RVec::Zero(spec.n - 1);
    xi_prime(0) = w;
    if (std::abs(w) <= 1e-14 * std::max(wmax, 1.0)) {
      // zero-frequency bin: every admissible symbol is homogeneous, so the
      // transverse part vanishes and the pencil collapses to lambda^2 I
      table.H1[j] = Mat::Zero(spec.N, spec.N);
      table.H2[j] = Mat::Zero(spec.N, spec.N);
      table.Y[j] = RMat::Zero(spec.N, spec.N);
      table.Z[j] = RMat::Zero(spec.N, spec.N);
      continue;
    }
    if (spec.kind == SystemKind::YZ) {
      RVec xi = RVec::Zero(spec.n);
      xi.tail(spec.n - 1) = xi_prime;
      RMat Y = eval_matrix(spec.Y, spec.N, x0, xi);
      RMat Z = eval_matrix(spec.Z, spec.N, x0, xi);
      Mat S1 = Y.cast<Complex>() + Complex(0, 1) * Z.cast<Complex>();
      table.Y[j] = Y;
      table.Z[j] = Z;
      table.H1[j] = -(S1 + S1.adjoint());
      table.H2[j] = S1.adjoint() * S1;
      continue;
    }
    QuadraticPencil p = pencil_at(spec, x0, xi_prime, tol);
    table.H1[j] = p.H1;
    table.H2[j] = p.H2;
    if (with_factors) {
      PencilFactorization f = factor_pencil(p, tol);
      table.Y[j] = f.Y;
      table.Z[j] = f.Z;
    } else {
      table.Y[j] = RMat::Zero(spec.N, spec.N);
      table.Z[j] = RMat::Zero(spec.N, spec.N);
    }
  }
  return table;
}

namespace {

TestField make_like(const TestField& v) {
  TestField out;
  out.N = v.N;
  out.comp.resize(v.N);
  return out;
}

void finish_field(TestField& out, const Grid& g) {
  double m = 0;
  for (auto& f : out.comp) m = std::max(m, f.cwiseAbs().maxCoeff());
  out.max_abs = m;
  out.support_defect = 0;
  (void)g;
}

}  // namespace

TestField apply_operator(const SymbolTable& sym, const TestField& v, const Grid& g) {
  if (v.N != sym.N) throw Error("field and symbol table component counts differ");
  int N = v.N;
  std::vector<Mat> vhat(N), d1(N), d2(N), ohat(N);
  for (int c = 0; c < N; ++c) {
    vhat[c] = fft_rows(v.comp[c]);
    d1[c] = dt_field(g, vhat[c], 1);
    d2[c] = dt_field(g, vhat[c], 2);
    ohat[c] = Mat::Zero(g.nt, g.nx);
  }
  const Complex iu(0, 1);
  for (int a = 0; a < N; ++a)
    for (int j = 0; j < g.nx; ++j) {
      ohat[a].col(j) = d2[a].col(j);
      for (int b = 0; b < N; ++b)
        ohat[a].col(j) += iu * sym.H1[j](a, b) * d1[b].col(j) - sym.H2[j](a, b) * vhat[b].col(j);
    }
  TestField out = make_like(v);
  for (int a = 0; a < N; ++a) out.comp[a] = ifft_rows(ohat[a]);
  finish_field(out, g);
  return out;
}

CoefficientField sample_coefficients(const SystemSpec& spec, const Grid& g) {
  if (spec.kind != SystemKind::Tensor) throw Error("grid coefficients need a tensor system");
  if (spec.n != 2) throw Error("variable-coefficient bench runs with n = 2");
  CoefficientField coef;
  coef.N = spec.N;
  coef.c.assign(static_cast<std::size_t>(spec.N) * spec.N * 4, RMat());
  RVec x(2), xi = RVec::Zero(2);
  for (int a = 1; a <= spec.N; ++a)
    for (int b = 1; b <= spec.N; ++b)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          std::size_t slot =
              ((static_cast<std::size_t>(a - 1) * spec.N + (b - 1)) * 2 + (p - 1)) * 2 + (q - 1);
          ExprPtr e = spec.tensor_entry(a, b, p, q);
          RMat field = RMat::Zero(g.nt, g.nx);
          if (e) {
            for (int i = 0; i < g.nt; ++i)
              for (int j = 0; j < g.nx; ++j) {
                x(0) = g.t(i);
                x(1) = g.x(j);
                field(i, j) = eval(*e, x, xi);
              }
          }
          coef.c[slot] = std::move(field);
        }
  return coef;
}

TestField apply_operator(const CoefficientField& coef, const TestField& v, const Grid& g) {
  if (v.N != coef.N) throw Error("field and coefficient component counts differ");
  int N = v.N;
  TestField out = make_like(v);
  for (int a = 0; a < N; ++a) out.comp[a] = Mat::Zero(g.nt, g.nx);
  for (int b = 0; b < N; ++b) {
    Mat d[2][2];
    d[0][0] = dd_field(g, v.comp[b], 0, 0);
    d[0][1] = dd_field(g, v.comp[b], 0, 1);
    d[1][0] = d[0][1];
    d[1][1] = dd_field(g, v.comp[b], 1, 1);
    for (int a = 0; a < N; ++a)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          std::size_t slot = ((static_cast<std::size_t>(a) * N + b) * 2 + p) * 2 + q;
          const RMat& cf = coef.c[slot];
          if (cf.size() == 0 || cf.cwiseAbs().maxCoeff() == 0) continue;
          out.comp[a].array() += cf.array().cast<Complex>() * d[p][q].array();
        }
  }
  finish_field(out, g);
  return out;
}

TestField apply_operator(const SystemSpec& spec, const TestField& v, const Grid& g) {
  return apply_operator(sample_coefficients(spec, g), v, g);
}

ConjugatedParts conjugated_parts(const RMat& Y, const RMat& Z, double k, double T, double t) {
  int N = static_cast<int>(Y.rows());
  ConjugatedParts parts;
  double s = k * (t - T);
  Mat iZm = Complex(0, 1) * (Z.cast<Complex>() - s * Mat::Identity(N, N));
  Mat iZp = Complex(0, 1) * (Z.cast<Complex>() + s * Mat::Identity(N, N));
  parts.G_k = Y.cast<Complex>() + iZm;
  parts.G_k_star = Y.transpose().cast<Complex>() - iZp;

  Mat S1 = Y.cast<Complex>() + Complex(0, 1) * Z.cast<Complex>();
  Mat H1 = -(S1 + S1.adjoint());
  Mat H2 = S1.adjoint() * S1;
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  double worst = 0;
  for (int trial = 0; trial < 3; ++trial) {
    Complex lam(uni(rng), uni(rng));
    Complex mu = lam + Complex(0, s);
    Mat hk = mu * mu * Mat::Identity(N, N) + mu * H1 + H2;
    Mat prod = (lam * Mat::Identity(N, N) - parts.G_k_star) *
               (lam * Mat::Identity(N, N) - parts.G_k);
    double scale = std::max(1.0, hk.norm());
    worst = std::max(worst, (hk - prod).norm() / scale);
  }
  parts.product_residual = worst;
  return parts;
}

FieldNorms field_norms(const TestField& v, const TestField& Lv, const Grid& g, bool with_second) {
  FieldNorms fn;
  fn.s0 = RVec::Zero(g.nt);
  fn.s1 = RVec::Zero(g.nt);
  fn.s2 = RVec::Zero(g.nt);
  fn.sL = RVec::Zero(g.nt);
  for (int c = 0; c < v.N; ++c) {
    const Mat& f = v.comp[c];
    Mat ft = dt_field(g, f, 1);
    Mat fx = dx_field(g, f, 1);
    fn.s0 += f.cwiseAbs2().rowwise().sum().real();
    fn.s1 += ft.cwiseAbs2().rowwise().sum().real() + fx.cwiseAbs2().rowwise().sum().real();
    if (with_second) {
      Mat ftt = dd_field(g, f, 0, 0);
      Mat ftx = dd_field(g, f, 0, 1);
      Mat fxx = dd_field(g, f, 1, 1);
      // ordered derivative pairs, so the mixed one counts twice
      fn.s2 += ftt.cwiseAbs2().rowwise().sum().real() +
               2.0 * ftx.cwiseAbs2().rowwise().sum().real() +
               fxx.cwiseAbs2().rowwise().sum().real();
    }
    fn.sL += Lv.comp[c].cwiseAbs2().rowwise().sum().real();
  }
  return fn;
}

BenchPoint ratio_from_norms(const FieldNorms& fn, double k, const Grid& g, CarlemanMode mode) {
  if (k * g.T < 1.0) throw Error("carleman ratio needs k >= 1/T");
  WeightField w = carleman_weight(g, k, g.T);
  double cell = g.dt * g.dx;
  double i0 = 0, i1 = 0, i2 = 0, r = 0;
  for (int i = 0; i < g.nt; ++i) {
    i0 += w.w2(i) * fn.s0(i) * cell;
    i1 += w.w2(i) * fn.s1(i) * cell;
    i2 += w.w2(i) * fn.s2(i) * cell;
    r += w.w2(i) * fn.sL(i) * cell;
  }
  BenchPoint pt;
  pt.k = k;
  pt.lhs0 = k * k * k * g.T * g.T * i0;
  pt.lhs1 = k * i1;
  pt.lhs2 = mode == CarlemanMode::Frozen ? i2 / (k * g.T * g.T) : 0.0;
  pt.rhs = r;
  double lhs = pt.lhs0 + pt.lhs1 + pt.lhs2;
  if (pt.rhs <= 0) {
    if (lhs > 0) throw Error("carleman ratio undefined: operator annihilated a nonzero field");
    pt.ratio = 0;
  } else {
    pt.ratio = lhs / pt.rhs;
  }
  return pt;
}

BenchPoint carleman_ratio(const SymbolTable& sym, const TestField& v, const Grid& g, double k) {
  TestField Lv = apply_operator(sym, v, g);
  return ratio_from_norms(field_norms(v, Lv, g, true), k, g, CarlemanMode::Frozen);
}

BenchPoint carleman_ratio(const SystemSpec& spec, const TestField& v, const Grid& g, double k) {
  TestField Lv = apply_operator(spec, v, g);
  return ratio_from_norms(field_norms(v, Lv, g, false), k, g, CarlemanMode::Variable);
}

std::vector<BatteryField> make_battery(const Grid& g, int N,
                                       const std::vector<std::uint64_t>& seeds) {
  std::vector<BatteryField> battery;
  battery.reserve(seeds.size());
  for (auto s : seeds) {
    BatteryField b;
    b.v = make_test_function(g, N, FieldKind::Random, 0.0, s);
    b.seed = s;
    battery.push_back(std::move(b));
  }
  return battery;
}

namespace {

CarlemanReport sweep_norms(const std::vector<FieldNorms>& norms,
                           const std::vector<std::uint64_t>& seeds, const Grid& g,
                           const std::vector<double>& k_list, CarlemanMode mode) {
  CarlemanReport rep;
  rep.mode = mode;
  rep.T = g.T;
  rep.k_list = k_list;
  std::vector<double> ratios;
  for (double k : k_list)
    for (std::size_t b = 0; b < norms.size(); ++b) {
      BenchPoint pt = ratio_from_norms(norms[b], k, g, mode);
      pt.seed = seeds[b];
      ratios.push_back(pt.ratio);
      rep.points.push_back(pt);
    }
  if (ratios.empty()) throw Error("carleman sweep needs at least one field and one k");
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  double mx = sorted.back();
  std::size_t n = sorted.size();
  double med = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  rep.fitted_c = mx;
  rep.stability = med > 0 ? mx / med : (mx > 0 ? std::numeric_limits<double>::infinity() : 1.0);
  rep.stable = rep.stability <= 4.0;
  return rep;
}

}  // namespace

CarlemanReport k_sweep(const SymbolTable& sym, const std::vector<BatteryField>& battery,
                       const Grid& g, const std::vector<double>& k_list) {
  std::vector<FieldNorms> norms;
  std::vector<std::uint64_t> seeds;
  for (const auto& b : battery) {
    TestField Lv = apply_operator(sym, b.v, g);
    norms.push_back(field_norms(b.v, Lv, g, true));
    seeds.push_back(b.seed);
  }
  return sweep_norms(norms, seeds, g, k_list, CarlemanMode::Frozen);
}

CarlemanReport k_sweep(const SystemSpec& spec, const std::vector<BatteryField>& battery,
                       const Grid& g, const std::vector<double>& k_list) {
  CoefficientField coef = sample_coefficients(spec, g);
  std::vector<FieldNorms> norms;
  std::vector<std::uint64_t> seeds;
  for (const auto& b : battery) {
    TestField Lv = apply_operator(coef, b.v, g);
    norms.push_back(field_norms(b.v, Lv, g, false));
    seeds.push_back(b.seed);
  }
  return sweep_norms(norms, seeds, g, k_list, CarlemanMode::Variable);
}

}  // namespace symfac
