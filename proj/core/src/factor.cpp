#include "symfac/factor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace symfac {

std::vector<Complex> pencil_roots(const QuadraticPencil& pencil) {
  int N = pencil.N;
  if (!pencil.H1.allFinite() || !pencil.H2.allFinite())
    throw Error("pencil coefficients must be finite");
  Mat comp = Mat::Zero(2 * N, 2 * N);
  comp.topRightCorner(N, N) = Mat::Identity(N, N);
  comp.bottomLeftCorner(N, N) = -pencil.H2;
  comp.bottomRightCorner(N, N) = -pencil.H1;
  Eigen::ComplexEigenSolver<Mat> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw Error("companion eigensolver failed");
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + 2 * N);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

namespace {

// One trapezoid pass: returns (moment1) * (moment0)^{-1} with
// moment_j = (2 pi i)^{-1} contour integral of zeta^j H(zeta)^{-1}.
Mat riesz_pass(const QuadraticPencil& pencil, const ContourSpec& c, int nodes) {
  int N = pencil.N;
  Mat m0 = Mat::Zero(N, N), m1 = Mat::Zero(N, N);
  constexpr double kPi = 3.14159265358979323846;
  for (int j = 0; j < nodes; ++j) {
    double th = 2.0 * kPi * j / nodes;
    Complex w = std::polar(1.0, th);
    Complex z = c.center + c.radius * w;
    Eigen::PartialPivLU<Mat> lu(pencil.at(z));
    Mat inv = lu.solve(Mat::Identity(N, N));
    if (!inv.allFinite()) throw Error("resolvent blew up on the contour");
    Complex wgt = c.radius * w / static_cast<double>(nodes);
    m0 += inv * wgt;
    m1 += inv * (wgt * z);
  }
  Eigen::FullPivLU<Mat> lu0(m0);
  if (lu0.rank() < N)
    throw Error("zeroth contour moment is singular; the circle does not enclose N roots");
  return m1 * lu0.inverse();
}

}  // namespace

RieszResult riesz_S1(const QuadraticPencil& pencil, const ContourSpec& contour,
                     const Tolerances& tol) {
  constexpr int kCap = 4096;
  int nodes = std::max(contour.node_count, 64);
  RieszResult res;
  res.S1 = riesz_pass(pencil, contour, nodes);
  res.node_count = nodes;
  res.delta = std::numeric_limits<double>::infinity();
  while (nodes < kCap) {
    nodes *= 2;
    Mat next = riesz_pass(pencil, contour, nodes);
    res.delta = (next - res.S1).norm() / std::max(1.0, next.norm());
    res.S1 = next;
    res.node_count = nodes;
    if (res.delta < tol.contour) return res;
  }
  throw Error("contour quadrature for S1 did not converge at " + std::to_string(kCap) +
              " nodes (last delta " + std::to_string(res.delta) + ")");
}

SplitYZ split_YZ(const Mat& S1, const Tolerances& tol) {
  SplitYZ s;
  s.Y = S1.real();
  s.Z = S1.imag();
  s.z_asym = (s.Z - s.Z.transpose()).norm();
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (s.Z + s.Z.transpose()));
  s.z_min_eig = es.eigenvalues().minCoeff();
  s.z_positive = s.z_min_eig > tol.pd;
  return s;
}

BParts build_B(const RMat& Y, const RMat& Z, const Tolerances& tol) {
  BParts b;
  RMat zs = 0.5 * (Z + Z.transpose());
  try {
    spd_sqrt(zs, tol.pd, &b.Z_sqrt, &b.Z_inv_sqrt);
  } catch (const AssumptionError&) {
    throw AssumptionError("Z = Im(S1) is not positive definite; factorization hypothesis fails");
  }
  Mat s1 = Y.cast<Complex>() + Complex(0, 1) * Z.cast<Complex>();
  b.B = b.Z_sqrt.cast<Complex>() * s1 * b.Z_inv_sqrt.cast<Complex>();
  b.B_R = b.B.real();
  b.B_I = b.B.imag();
  b.sym_defect = (b.B - b.B.transpose()).norm();
  return b;
}

FactorResiduals verify_factorizations(const QuadraticPencil& pencil,
                                      const PencilFactorization& fac, const Tolerances& tol) {
  (void)tol;
  FactorResiduals r;
  const Mat& s1 = fac.S1;
  double s = std::max(1.0, s1.norm());
  r.h1 = (pencil.H1 + s1 + s1.adjoint()).norm() / std::max(1.0, pencil.H1.norm());
  r.h2 = (pencil.H2 - s1.adjoint() * s1).norm() / std::max(1.0, pencil.H2.norm());

  Mat zinv = (fac.Z_inv_sqrt * fac.Z_inv_sqrt).cast<Complex>();
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  int N = pencil.N;
  for (int i = 0; i < 5; ++i) {
    Complex lam(uni(rng) * s, uni(rng) * s);
    Mat lhs = fac.Z_inv_sqrt.cast<Complex>() * pencil.at(lam) * fac.Z_inv_sqrt.cast<Complex>();
    Mat rhs = (lam * Mat::Identity(N, N) - fac.B.adjoint()) * zinv *
              (lam * Mat::Identity(N, N) - fac.B);
    r.calH = std::max(r.calH, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
  }

  Eigen::ComplexEigenSolver<Mat> es(fac.B, false);
  r.halfplane_margin = es.eigenvalues().imag().minCoeff();
  return r;
}

namespace {

// Worst matching distance between eig(S1) and the enclosed roots (greedy
// multiset matching; fine at these sizes).
double match_roots(const Mat& S1, const std::vector<Complex>& roots, const ContourSpec& c) {
  Eigen::ComplexEigenSolver<Mat> es(S1, false);
  std::vector<Complex> target;
  for (Complex r : roots)
    if (std::abs(r - c.center) < c.radius) target.push_back(r);
  std::vector<bool> used(target.size(), false);
  double worst = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    Complex e = es.eigenvalues()(i);
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(e - target[j]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    if (arg < 0) return std::numeric_limits<double>::infinity();
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

PencilFactorization factor_pencil(const QuadraticPencil& pencil, const Tolerances& tol) {
  PencilFactorization fac;
  fac.roots = pencil_roots(pencil);
  fac.contour = choose_contour_upper(fac.roots);
  RieszResult rr = riesz_S1(pencil, fac.contour, tol);
  fac.S1 = rr.S1;
  fac.node_count = rr.node_count;
  fac.quad_delta = rr.delta;

  SplitYZ s = split_YZ(fac.S1, tol);
  fac.Y = s.Y;
  fac.Z = s.Z;
  fac.z_min_eig = s.z_min_eig;
  fac.z_asym = s.z_asym;
  if (!s.z_positive)
    throw AssumptionError("Z = Im(S1) not positive definite (min eig " +
                          std::to_string(s.z_min_eig) + ")");

  BParts b = build_B(fac.Y, fac.Z, tol);
  fac.B = b.B;
  fac.B_R = b.B_R;
  fac.B_I = b.B_I;
  fac.Z_sqrt = b.Z_sqrt;
  fac.Z_inv_sqrt = b.Z_inv_sqrt;
  fac.b_sym_defect = b.sym_defect;
  fac.root_match = match_roots(fac.S1, fac.roots, fac.contour);
  fac.residuals = verify_factorizations(pencil, fac, tol);
  return fac;
}

}  // namespace symfac
