#include "symfac/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "symfac/sampling.hpp"

namespace symfac {

namespace {

Mat resolvent_pass(const Mat& B, const ContourSpec& c, int nodes) {
  constexpr double kPi = 3.14159265358979323846;
  int N = static_cast<int>(B.rows());
  Mat acc = Mat::Zero(N, N);
  for (int j = 0; j < nodes; ++j) {
    double th = 2.0 * kPi * j / nodes;
    Complex w = std::polar(1.0, th);
    Complex z = c.center + c.radius * w;
    Mat res = (z * Mat::Identity(N, N) - B).partialPivLu().solve(Mat::Identity(N, N));
    if (!res.allFinite() || res.norm() > 1e14)
      throw Error("resolvent blow-up on the projection contour (eigenvalue on the circle?)");
    acc += res * (c.radius * w / static_cast<double>(nodes));
  }
  return acc;
}

// Circle around `members`, avoiding `others`; used for projection contours.
// Unlike the factorization contour this only avoids the real axis when the
// cluster sits above it.
ContourSpec cluster_circle(const std::vector<Complex>& members,
                           const std::vector<Complex>& others) {
  Complex c(0, 0);
  for (Complex m : members) c += m;
  c /= static_cast<double>(members.size());
  double rho = 0.0;
  for (Complex m : members) rho = std::max(rho, std::abs(m - c));
  double dmin = std::numeric_limits<double>::infinity();
  for (Complex o : others) dmin = std::min(dmin, std::abs(o - c));
  if (c.imag() > 0) dmin = std::min(dmin, c.imag());

  ContourSpec spec;
  spec.center = c;
  if (std::isinf(dmin)) {
    spec.radius = rho + std::max(1.0, rho);
    spec.margin = spec.radius - rho;
  } else {
    if (dmin <= rho) throw Error("eigenvalue cluster cannot be separated by a circle");
    spec.radius = 0.5 * (rho + dmin);
    spec.margin = 0.25 * (dmin - rho);
  }
  spec.node_count = 64;
  return spec;
}

}  // namespace

Mat riesz_projection(const Mat& B, const ContourSpec& cluster, const Tolerances& tol) {
  constexpr int kCap = 4096;
  int nodes = std::max(cluster.node_count, 64);
  Mat p = resolvent_pass(B, cluster, nodes);
  while (nodes < kCap) {
    nodes *= 2;
    Mat next = resolvent_pass(B, cluster, nodes);
    double delta = (next - p).norm() / std::max(1.0, next.norm());
    p = next;
    if (delta < tol.contour) return p;
  }
  throw Error("projection contour quadrature did not converge");
}

SpectralReport eigen_structure(const Mat& B, const Tolerances& tol) {
  if (!B.allFinite()) throw Error("eigen_structure needs a finite matrix");
  int N = static_cast<int>(B.rows());
  Eigen::ComplexEigenSolver<Mat> es(B, false);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + N);
  double scale = 0.0;
  for (Complex e : ev) scale = std::max(scale, std::abs(e));
  double gap = tol.cluster * std::max(scale, 1e-300);

  // single-linkage clustering at the relative gap
  std::vector<int> group(N);
  std::iota(group.begin(), group.end(), 0);
  std::function<int(int)> find = [&](int i) { return group[i] == i ? i : group[i] = find(group[i]); };
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (std::abs(ev[i] - ev[j]) <= gap) group[find(i)] = find(j);

  std::vector<std::vector<int>> buckets;
  std::vector<int> root_of;
  for (int i = 0; i < N; ++i) {
    int r = find(i);
    auto it = std::find(root_of.begin(), root_of.end(), r);
    if (it == root_of.end()) {
      root_of.push_back(r);
      buckets.push_back({i});
    } else {
      buckets[it - root_of.begin()].push_back(i);
    }
  }
  // deterministic cluster order
  std::sort(buckets.begin(), buckets.end(), [&](const auto& a, const auto& b) {
    Complex ca(0, 0), cb(0, 0);
    for (int i : a) ca += ev[i];
    for (int i : b) cb += ev[i];
    ca /= static_cast<double>(a.size());
    cb /= static_cast<double>(b.size());
    return ca.real() != cb.real() ? ca.real() < cb.real() : ca.imag() < cb.imag();
  });

  SpectralReport rep;
  for (const auto& idx : buckets) {
    EigenCluster c;
    Complex mean(0, 0);
    for (int i : idx) mean += ev[i];
    c.lambda = mean / static_cast<double>(idx.size());
    c.multiplicity = static_cast<int>(idx.size());
    std::vector<Complex> members, others;
    for (int i = 0; i < N; ++i) {
      bool in = std::find(idx.begin(), idx.end(), i) != idx.end();
      (in ? members : others).push_back(ev[i]);
    }
    c.P = riesz_projection(B, cluster_circle(members, others), tol);
    rep.clusters.push_back(std::move(c));
  }

  Mat sum_p = Mat::Zero(N, N), recon = Mat::Zero(N, N);
  for (const auto& c : rep.clusters) {
    rep.max_projection_norm = std::max(rep.max_projection_norm, c.P.operatorNorm());
    sum_p += c.P;
    recon += c.lambda * c.P;
    rep.trace_defect = std::max(
        rep.trace_defect, std::abs(c.P.trace() - Complex(std::round(c.P.trace().real()), 0)));
    rep.algebra_residual = std::max(rep.algebra_residual, (c.P * c.P - c.P).norm());
    rep.algebra_residual = std::max(rep.algebra_residual, (B * c.P - c.P * B).norm());
  }
  for (std::size_t i = 0; i < rep.clusters.size(); ++i)
    for (std::size_t j = 0; j < rep.clusters.size(); ++j)
      if (i != j)
        rep.algebra_residual = std::max(
            rep.algebra_residual, (rep.clusters[i].P * rep.clusters[j].P).norm());

  rep.identity_residual = (sum_p - Mat::Identity(N, N)).norm();
  rep.reconstruction_residual = (recon - B).norm();
  rep.diagonalizable = rep.reconstruction_residual <= tol.diag * std::max(B.norm(), 1e-300);

  rep.min_rel_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.clusters.size(); ++i)
    for (std::size_t j = i + 1; j < rep.clusters.size(); ++j)
      rep.min_rel_gap =
          std::min(rep.min_rel_gap, std::abs(rep.clusters[i].lambda - rep.clusters[j].lambda) /
                                        std::max(scale, 1e-300));
  return rep;
}

namespace {

AuditSample audit_one(const SystemSpec& spec, const RVec& x, const RVec& xi_prime,
                      const Tolerances& tol) {
  AuditSample s;
  s.xi_prime = xi_prime;
  try {
    QuadraticPencil pencil = pencil_at(spec, x, xi_prime, tol);
    PencilFactorization fac = factor_pencil(pencil, tol);
    SpectralReport rep = eigen_structure(fac.B, tol);
    s.max_projection_norm = rep.max_projection_norm;
    s.diagonalizable = rep.diagonalizable;
    s.min_rel_gap = rep.min_rel_gap;
  } catch (const Error& e) {
    s.skipped = true;
    s.skip_reason = e.what();
  }
  return s;
}

}  // namespace

AuditReport audit_further_assumptions(const SystemSpec& spec, const RVec& x, int sample_count,
                                      const Tolerances& tol) {
  if (spec.n < 2) throw Error("audit needs n >= 2");
  AuditReport rep;
  rep.x = x;

  std::vector<RVec> dirs = sphere_samples(spec.n - 1, sample_count);
  for (const RVec& d : dirs) rep.samples.push_back(audit_one(spec, x, d, tol));

  // refine near small gaps: denser local patches around suspicious samples
  double patch_radius =
      (spec.n - 1 == 1) ? 0.0 : 3.14159265358979323846 / std::max(sample_count, 8);
  std::size_t first_pass = rep.samples.size();
  for (std::size_t i = 0; i < first_pass; ++i) {
    const AuditSample& s = rep.samples[i];
    if (s.skipped || patch_radius == 0.0) continue;
    if (s.min_rel_gap < 10 * tol.cluster) {
      for (const RVec& d : sphere_patch(s.xi_prime, patch_radius, 8)) {
        AuditSample r = audit_one(spec, x, d, tol);
        r.refined = true;
        rep.samples.push_back(r);
        ++rep.refined;
      }
    }
  }

  rep.all_diagonalizable = true;
  for (const AuditSample& s : rep.samples) {
    if (s.skipped) {
      ++rep.skipped;
      continue;
    }
    if (!s.diagonalizable) rep.all_diagonalizable = false;
    if (s.max_projection_norm > rep.sup_projection_norm) {
      rep.sup_projection_norm = s.max_projection_norm;
      rep.argmax_xi = s.xi_prime;
    }
  }

  // commutativity probe at a generic direction (axis-aligned samples can
  // accidentally commute)
  RVec generic(spec.n - 1);
  for (int i = 0; i < spec.n - 1; ++i) generic(i) = 1.0 / std::sqrt(2.0 + i);
  generic.normalize();
  try {
    QuadraticPencil pencil = pencil_at(spec, x, generic, tol);
    double comm = 0.0;
    auto cf = commutativity_path(pencil, tol, &comm);
    rep.commutative = cf.has_value();
    rep.commutator_norm = comm;
  } catch (const Error&) {
    rep.commutative = false;
    rep.commutator_norm = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

int kernel_dimension_sum(const SystemSpec& spec, const RVec& x, const RVec& xi,
                         const Tolerances& tol, bool* ambiguous) {
  if (ambiguous) *ambiguous = false;
  QuadraticPencil pencil;
  if (spec.kind == SystemKind::Tensor) {
    RVec eta = RVec::Zero(spec.n);
    eta(0) = 1.0;
    pencil = reduce_to_pencil(build_frame_blocks(spec, x, eta, xi, tol), tol);
  } else {
    // pencil / YZ entries depend on the transverse components only
    pencil = pencil_at(spec, x, xi.tail(spec.n - 1), tol);
  }

  std::vector<Complex> roots = pencil_roots(pencil);
  double scale = 0.0;
  for (Complex r : roots) scale = std::max(scale, std::abs(r));
  double gap = tol.cluster * std::max(scale, 1e-300);

  std::vector<Complex> distinct;
  std::vector<int> mult;
  for (Complex r : roots) {
    bool merged = false;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (std::abs(r - distinct[i]) <= gap) {
        distinct[i] = (distinct[i] * static_cast<double>(mult[i]) + r) /
                      static_cast<double>(mult[i] + 1);
        ++mult[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      distinct.push_back(r);
      mult.push_back(1);
    }
  }

  int total = 0;
  for (Complex lam : distinct) {
    Eigen::JacobiSVD<Mat> svd(pencil.at(lam));
    const RVec& sv = svd.singularValues();
    double top = sv(0);
    // H(lam) negligible against the pencil scale means the whole matrix
    // vanishes at this root (total degeneracy), not that it has full rank
    double pencil_scale = std::abs(lam) * std::abs(lam) + pencil.H1.norm() * std::abs(lam) +
                          pencil.H2.norm();
    if (top <= tol.rank * std::max(pencil_scale, 1e-300)) {
      total += pencil.N;
      continue;
    }
    for (int i = 0; i < sv.size(); ++i) {
      double rel = sv(i) / top;
      if (rel <= tol.rank) ++total;
      if (ambiguous && rel > tol.rank / 10 && rel < tol.rank * 10) *ambiguous = true;
    }
  }
  return total;
}

std::optional<CommutativeFactorization> commutativity_path(const QuadraticPencil& pencil,
                                                           const Tolerances& tol,
                                                           double* commutator_out) {
  const Mat& h1 = pencil.H1;
  const Mat& h2 = pencil.H2;
  double herm = std::max((h1 - h1.adjoint()).norm(), (h2 - h2.adjoint()).norm());
  if (herm > 1e-8 * std::max({h1.norm(), h2.norm(), 1.0}))
    throw Error("commutativity_path needs a Hermitian pencil");

  double comm = (h1 * h2 - h2 * h1).norm();
  if (commutator_out) *commutator_out = comm;
  double rel_scale = std::max(h1.norm() * h2.norm(), 1e-300);
  if (comm > tol.comm * rel_scale) return std::nullopt;

  int N = pencil.N;
  Eigen::SelfAdjointEigenSolver<Mat> es1(h1);
  if (es1.info() != Eigen::Success) throw Error("eigensolver failed on H1");
  Mat g = es1.eigenvectors();
  RVec s1 = es1.eigenvalues();

  // refine within degenerate H1 eigenspaces so H2 becomes diagonal there too
  double grp = 1e-8 * std::max(1.0, h1.norm());
  int i = 0;
  while (i < N) {
    int j = i + 1;
    while (j < N && s1(j) - s1(j - 1) <= grp) ++j;
    if (j - i > 1) {
      Mat block = g.middleCols(i, j - i);
      Eigen::SelfAdjointEigenSolver<Mat> es2(block.adjoint() * h2 * block);
      if (es2.info() != Eigen::Success) throw Error("eigensolver failed on an H2 block");
      g.middleCols(i, j - i) = block * es2.eigenvectors();
    }
    i = j;
  }

  Mat d1 = g.adjoint() * h1 * g;
  Mat d2 = g.adjoint() * h2 * g;
  double offdiag = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      if (r != c) offdiag = std::max({offdiag, std::abs(d1(r, c)), std::abs(d2(r, c))});
  if (offdiag > 1e-7 * std::max({h1.norm(), h2.norm(), 1.0}))
    throw Error("simultaneous diagonalization failed despite a small commutator");

  CommutativeFactorization cf;
  cf.commutator_norm = comm;
  cf.G = g;
  cf.sigma1 = d1.diagonal().real();
  cf.sigma2 = d2.diagonal().real();
  cf.gap_ok = true;
  RVec disc = cf.sigma1.array().square() - 4.0 * cf.sigma2.array();
  for (int r = 0; r < N; ++r)
    if (disc(r) >= 0.0) cf.gap_ok = false;

  if (cf.gap_ok) {
    CVec diag(N);
    for (int r = 0; r < N; ++r)
      diag(r) = Complex(-0.5 * cf.sigma1(r), 0.5 * std::sqrt(-disc(r)));
    cf.B = cf.G * diag.asDiagonal() * cf.G.adjoint();
  }
  return cf;
}

}  // namespace symfac
