#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symfac/contour.hpp"
#include "symfac/factor.hpp"
#include "symfac/symbol.hpp"
#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// P = (2 pi i)^{-1} contour integral of (zeta - B)^{-1} around one
// eigenvalue cluster of B.
Mat riesz_projection(const Mat& B, const ContourSpec& cluster, const Tolerances& tol = {});

struct EigenCluster {
  Complex lambda;        // cluster representative (mean)
  int multiplicity = 0;  // root count in the cluster
  Mat P;                 // Riesz projection
};

struct SpectralReport {
  std::vector<EigenCluster> clusters;
  double max_projection_norm = 0;
  bool diagonalizable = false;
  double reconstruction_residual = 0;  // ||sum lambda_h P_h - B|| / ||B||
  double identity_residual = 0;        // ||sum P_h - I||
  double algebra_residual = 0;         // worst idempotency/annihilation/commutation defect
  double trace_defect = 0;             // worst |trace P_h - multiplicity|
  double min_rel_gap = 0;              // smallest relative gap between clusters
};

// Clusters eig(B) at relative gap tol.cluster and computes one projection
// per cluster. Diagonalizable iff the spectral reconstruction residual is
// below tol.diag relative to ||B||.
SpectralReport eigen_structure(const Mat& B, const Tolerances& tol = {});

struct AuditSample {
  RVec xi_prime;
  bool skipped = false;  // factorization failed or direction degenerate
  std::string skip_reason;
  double max_projection_norm = 0;
  bool diagonalizable = false;
  double min_rel_gap = 0;
  bool refined = false;  // came from the refinement pass
};

struct AuditReport {
  RVec x;
  std::vector<AuditSample> samples;
  double sup_projection_norm = 0;
  RVec argmax_xi;
  bool all_diagonalizable = false;
  int skipped = 0;
  int refined = 0;
  // Commutative fast-path data at this x (sampled at one generic xi')
  bool commutative = false;
  double commutator_norm = 0;
};

// Sweeps xi' over the unit sphere of R^{n-1} (>= sample_count points, plus
// a denser patch near any small eigenvalue gap) and audits projection
// boundedness and diagonalizability of B(x, xi').
AuditReport audit_further_assumptions(const SystemSpec& spec, const RVec& x, int sample_count,
                                      const Tolerances& tol = {});

// Sum over distinct pencil roots of dim ker H(lambda), ranks decided by
// singular values under tol.rank * ||H(lambda)||. `ambiguous` is set when a
// singular value falls within 10x of the cutoff.
int kernel_dimension_sum(const SystemSpec& spec, const RVec& x, const RVec& xi,
                         const Tolerances& tol = {}, bool* ambiguous = nullptr);

struct CommutativeFactorization {
  double commutator_norm = 0;  // ||H1 H2 - H2 H1|| (relative)
  Mat G;                       // unitary (orthogonal for real pencils)
  RVec sigma1, sigma2;         // diagonals of G^H H1 G, G^H H2 G
  Mat B;                       // upper-half-plane quadratic root
  bool gap_ok = false;         // sigma1^2 - 4 sigma2 < 0 entrywise
};

// Remark-style shortcut for commuting Hermitian H1, H2: simultaneous
// diagonalization and a closed-form B. Returns nullopt (with the commutator
// norm via *commutator_out) when the pencil does not commute.
std::optional<CommutativeFactorization> commutativity_path(const QuadraticPencil& pencil,
                                                           const Tolerances& tol = {},
                                                           double* commutator_out = nullptr);

}  // namespace symfac
