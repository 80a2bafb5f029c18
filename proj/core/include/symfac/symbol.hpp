#pragma once

#include <vector>

#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Symmetry and strong-ellipticity scan of a coefficient tensor.
struct BasicReport {
  bool symmetry_ok = false;
  double max_symmetry_defect = 0.0;
  double ellipticity_delta = 0.0;  // min of the Legendre form over samples
  RVec worst_x, worst_a, worst_b;  // where the minimum was attained
  int x_count = 0;
  int pair_count = 0;
};

BasicReport check_basic_assumptions(const SystemSpec& spec, const std::vector<RVec>& x_samples,
                                    const std::vector<std::pair<RVec, RVec>>& ab_samples,
                                    const Tolerances& tol = {});

// M_{ab}(x, zeta) = sum C^{jl}_{ab}(x) zeta_j zeta_l. Real symmetric for
// real zeta and symmetric C; returned complex for uniformity downstream.
Mat assemble_symbol(const SystemSpec& spec, const RVec& x, const RVec& zeta);

// Blocks of M restricted to the two-plane spanned by a unit conormal eta
// and a transverse covector xi: M(x, lambda*eta + xi) = T lambda^2 + A lambda + Q.
struct SymbolBlocks {
  RMat T, R, A, Q;
  RVec x, eta, xi;
  double frame_defect = 0.0;  // max residual of the two-plane identity
};

SymbolBlocks build_frame_blocks(const SystemSpec& spec, const RVec& x, const RVec& eta,
                                const RVec& xi, const Tolerances& tol = {});

// Monic quadratic pencil H(lambda) = lambda^2 I + H1 lambda + H2.
struct QuadraticPencil {
  int N = 0;
  Mat H1, H2;
  Mat at(Complex lambda) const;
};

// H1 = T^{-1/2} A T^{-1/2}, H2 = T^{-1/2} Q T^{-1/2}. Throws
// AssumptionError when T fails to be positive definite.
QuadraticPencil reduce_to_pencil(const SymbolBlocks& blocks, const Tolerances& tol = {});

// Pencil frozen at (x, eta=e1, xi=(0,xi')) for any system kind. Tensor
// systems go through the frame blocks; pencil entries evaluate directly;
// YZ data uses S1 = Y+iZ, H1 = -(S1+S1^H), H2 = S1^H S1.
QuadraticPencil pencil_at(const SystemSpec& spec, const RVec& x, const RVec& xi_prime,
                          const Tolerances& tol = {});

// Symmetric positive square root (and inverse root) via eigendecomposition;
// eigenvalues at or below tol.pd raise AssumptionError.
void spd_sqrt(const RMat& S, double pd_tol, RMat* root, RMat* inv_root);

}  // namespace symfac
