#include "symfac/symbol.hpp"

#include <cmath>
#include <random>

#include "symfac/sampling.hpp"

namespace symfac {

BasicReport check_basic_assumptions(const SystemSpec& spec, const std::vector<RVec>& x_samples,
                                    const std::vector<std::pair<RVec, RVec>>& ab_samples,
                                    const Tolerances& tol) {
  if (spec.kind != SystemKind::Tensor)
    throw Error("check_basic_assumptions needs a tensor-kind system");
  if (x_samples.empty() || ab_samples.empty())
    throw Error("check_basic_assumptions needs nonempty sample sets");
  if (ab_samples.front().first.size() != spec.N || ab_samples.front().second.size() != spec.n)
    throw Error("check_basic_assumptions pairs are (N-vector, n-covector)");

  BasicReport rep;
  rep.x_count = static_cast<int>(x_samples.size());
  rep.pair_count = static_cast<int>(ab_samples.size());

  RVec xi0 = RVec::Zero(spec.n);
  for (const RVec& x : x_samples)
    for (int al = 1; al <= spec.N; ++al)
      for (int be = 1; be <= spec.N; ++be)
        for (int j = 1; j <= spec.n; ++j)
          for (int l = 1; l <= spec.n; ++l) {
            const ExprPtr& e = spec.tensor_entry(al, be, j, l);
            const ExprPtr& et = spec.tensor_entry(be, al, l, j);
            double v = e ? eval(*e, x, xi0) : 0.0;
            double vt = et ? eval(*et, x, xi0) : 0.0;
            rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, std::abs(v - vt));
          }
  rep.symmetry_ok = rep.max_symmetry_defect <= tol.sym;

  // Legendre form a^T M(x,b) a minimized over the sampled sphere product,
  // then one local refinement pass around the minimizer.
  double delta = std::numeric_limits<double>::infinity();
  auto form = [&](const RVec& x, const RVec& a, const RVec& b) {
    RMat m = contract(spec, x, b, b);
    return a.dot(m * a);
  };
  for (const RVec& x : x_samples) {
    RMat m;
    const RVec* cached_b = nullptr;
    for (const auto& [a, b] : ab_samples) {
      if (!cached_b || *cached_b != b) {
        m = contract(spec, x, b, b);
        cached_b = &b;
      }
      double v = a.dot(m * a);
      if (v < delta) {
        delta = v;
        rep.worst_x = x;
        rep.worst_a = a;
        rep.worst_b = b;
      }
    }
  }
  if (rep.worst_a.size() > 0) {
    for (auto& a : sphere_patch(rep.worst_a, 0.05, 32))
      for (auto& b : sphere_patch(rep.worst_b, 0.05, 32)) {
        double v = form(rep.worst_x, a, b);
        if (v < delta) {
          delta = v;
          rep.worst_a = a;
          rep.worst_b = b;
        }
      }
  }
  rep.ellipticity_delta = delta;
  return rep;
}

Mat assemble_symbol(const SystemSpec& spec, const RVec& x, const RVec& zeta) {
  return contract(spec, x, zeta, zeta).cast<Complex>();
}

SymbolBlocks build_frame_blocks(const SystemSpec& spec, const RVec& x, const RVec& eta,
                                const RVec& xi, const Tolerances& tol) {
  double ne = eta.norm(), nx = xi.norm();
  if (ne < 1e-14 || nx < 1e-14) throw Error("frame vectors must be nonzero");
  // sin of the angle between xi and eta
  RVec xp = xi - xi.dot(eta) / (ne * ne) * eta;
  if (xp.norm() / nx <= tol.indep) throw Error("xi is (numerically) parallel to eta");

  SymbolBlocks b;
  b.x = x;
  b.eta = eta;
  b.xi = xi;
  b.T = contract(spec, x, eta, eta);
  b.R = contract(spec, x, eta, xi);
  b.A = b.R + b.R.transpose();
  b.Q = contract(spec, x, xi, xi);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  double scale = std::max({b.T.norm(), b.A.norm(), b.Q.norm(), 1e-300});
  for (int s = 0; s < 5; ++s) {
    double lam = uni(rng);
    RMat lhs = contract(spec, x, lam * eta + xi, lam * eta + xi);
    RMat rhs = b.T * lam * lam + b.A * lam + b.Q;
    b.frame_defect = std::max(b.frame_defect, (lhs - rhs).norm() / scale);
  }
  return b;
}

Mat QuadraticPencil::at(Complex lambda) const {
  return lambda * lambda * Mat::Identity(N, N) + lambda * H1 + H2;
}

void spd_sqrt(const RMat& S, double pd_tol, RMat* root, RMat* inv_root) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (S + S.transpose()));
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver failed");
  RVec ev = es.eigenvalues();
  if (ev.minCoeff() <= pd_tol)
    throw AssumptionError("matrix not positive definite (min eigenvalue " +
                          std::to_string(ev.minCoeff()) + ")");
  RVec r = ev.array().sqrt();
  if (root) *root = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
  if (inv_root)
    *inv_root =
        es.eigenvectors() * r.array().inverse().matrix().asDiagonal() * es.eigenvectors().transpose();
}

QuadraticPencil reduce_to_pencil(const SymbolBlocks& blocks, const Tolerances& tol) {
  RMat ti;
  try {
    spd_sqrt(blocks.T, tol.pd, nullptr, &ti);
  } catch (const AssumptionError&) {
    throw AssumptionError("T block not positive definite; ellipticity fails along eta");
  }
  QuadraticPencil p;
  p.N = static_cast<int>(blocks.T.rows());
  p.H1 = (ti * blocks.A * ti).cast<Complex>();
  p.H2 = (ti * blocks.Q * ti).cast<Complex>();
  return p;
}

QuadraticPencil pencil_at(const SystemSpec& spec, const RVec& x, const RVec& xi_prime,
                          const Tolerances& tol) {
  if (static_cast<int>(xi_prime.size()) != spec.n - 1)
    throw Error("xi' must have n-1 components");
  RVec xi = RVec::Zero(spec.n);
  xi.tail(spec.n - 1) = xi_prime;

  if (spec.kind == SystemKind::Tensor) {
    RVec eta = RVec::Zero(spec.n);
    eta(0) = 1.0;
    return reduce_to_pencil(build_frame_blocks(spec, x, eta, xi, tol), tol);
  }
  QuadraticPencil p;
  p.N = spec.N;
  if (spec.kind == SystemKind::Pencil) {
    p.H1 = eval_matrix(spec.H1, spec.N, x, xi).cast<Complex>();
    p.H2 = eval_matrix(spec.H2, spec.N, x, xi).cast<Complex>();
    return p;
  }
  Mat s1 = eval_matrix(spec.Y, spec.N, x, xi).cast<Complex>() +
           Complex(0, 1) * eval_matrix(spec.Z, spec.N, x, xi).cast<Complex>();
  p.H1 = -(s1 + s1.adjoint());
  p.H2 = s1.adjoint() * s1;
  return p;
}

}  // namespace symfac
