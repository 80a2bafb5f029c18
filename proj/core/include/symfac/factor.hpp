#pragma once

#include <vector>

#include "symfac/contour.hpp"
#include "symfac/symbol.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Roots of det(lambda^2 I + H1 lambda + H2) = 0 as eigenvalues of the
// 2N x 2N companion matrix [[0, I], [-H2, -H1]].
std::vector<Complex> pencil_roots(const QuadraticPencil& pencil);

struct RieszResult {
  Mat S1;
  int node_count = 0;   // nodes at convergence
  double delta = 0.0;   // ||change|| at the last node doubling
};

// S1 = (contour integral of zeta H^{-1}) * (contour integral of H^{-1})^{-1},
// trapezoid nodes doubled from contour.node_count until the result moves by
// less than tol.contour (cap 4096 nodes).
RieszResult riesz_S1(const QuadraticPencil& pencil, const ContourSpec& contour,
                     const Tolerances& tol = {});

struct SplitYZ {
  RMat Y, Z;             // entrywise real and imaginary parts of S1
  double z_min_eig = 0;  // min eigenvalue of sym(Z)
  double z_asym = 0;     // ||Z - Z^T||
  bool z_positive = false;
};

SplitYZ split_YZ(const Mat& S1, const Tolerances& tol = {});

struct BParts {
  Mat B;
  RMat B_R, B_I;
  RMat Z_sqrt, Z_inv_sqrt;
  double sym_defect = 0;  // ||B - B^T||
};

// B = Z^{1/2} S1 Z^{-1/2} with B_I = Z; complex symmetric up to the
// reported defect. Throws AssumptionError when Z is not positive definite.
BParts build_B(const RMat& Y, const RMat& Z, const Tolerances& tol = {});

struct FactorResiduals {
  double h1 = 0;                // ||H1 + S1 + S1^H|| (relative)
  double h2 = 0;                // ||H2 - S1^H S1|| (relative)
  double calH = 0;              // conjugated quadratic identity at random lambda
  double halfplane_margin = 0;  // min Im eig(B)
};

struct PencilFactorization {
  Mat S1;
  RMat Y, Z;
  RMat Z_sqrt, Z_inv_sqrt;
  Mat B;
  RMat B_R, B_I;
  std::vector<Complex> roots;  // all 2N pencil roots
  ContourSpec contour;         // contour used for S1
  int node_count = 0;
  double quad_delta = 0;
  double z_min_eig = 0;
  double z_asym = 0;
  double b_sym_defect = 0;
  double root_match = 0;  // eig(S1) vs enclosed roots, worst matching distance
  FactorResiduals residuals;
};

FactorResiduals verify_factorizations(const QuadraticPencil& pencil,
                                      const PencilFactorization& fac,
                                      const Tolerances& tol = {});

// Full pipeline: roots, contour, S1, split, B, residuals.
PencilFactorization factor_pencil(const QuadraticPencil& pencil, const Tolerances& tol = {});

}  // namespace symfac
