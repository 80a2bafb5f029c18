#pragma once

#include <cstdint>
#include <vector>

#include "symfac/factor.hpp"
#include "symfac/grid.hpp"
#include "symfac/symbol.hpp"
#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Weight e^{k(t-T)^2} sampled on the t grid. Values switch to log scale
// when kT^2 > 600; ratios are weight-normalization invariant so callers use
// w2 (normalized by its max when linear_ok is false).
struct WeightField {
  RVec log_w2;  // k (t-T)^2 per node
  RVec w2;      // linear weight, normalized when linear_ok is false
  bool linear_ok = true;
};

WeightField carleman_weight(const Grid& g, double k, double T);

// Frozen symbol data per transverse frequency bin: pencil coefficients and
// the factor split (Y, Z vanish at the zero frequency by homogeneity).
struct SymbolTable {
  int N = 0;
  std::vector<Mat> H1, H2;
  std::vector<RMat> Y, Z;
};

SymbolTable freeze_symbol(const SystemSpec& spec, const RVec& x0, const Grid& g,
                          const Tolerances& tol = {}, bool with_factors = true);

// Constant-coefficient operator with symbol -H(xi1, xi'):
// Ldot v = d_t^2 v + i H1(D') d_t v - H2(D') v, transversely spectral.
TestField apply_operator(const SymbolTable& sym, const TestField& v, const Grid& g);

// Variable tensor coefficients evaluated on the grid (n = 2):
// (L v)_a = sum_{p,q} C^{pq}_{ab}(t, x) dd_{pq} v_b.
TestField apply_operator(const SystemSpec& spec, const TestField& v, const Grid& g);

// Grid-sampled coefficient fields, reusable across battery members.
struct CoefficientField {
  int N = 0;
  std::vector<RMat> c;  // indexed [((a*N+b)*2+p)*2+q], each nt x nx
};
CoefficientField sample_coefficients(const SystemSpec& spec, const Grid& g);
TestField apply_operator(const CoefficientField& coef, const TestField& v, const Grid& g);

// Conjugated first-order factors at one (xi', t): G_k = Y + i(Z - k(t-T)),
// G_k^* = Y^T - i(Z + k(t-T)); the quadratic symbol shifted by ik(t-T)
// factors through them exactly (residual reported).
struct ConjugatedParts {
  Mat G_k, G_k_star;
  double product_residual = 0;
};
ConjugatedParts conjugated_parts(const RMat& Y, const RMat& Z, double k, double T, double t);

struct BenchPoint {
  double k = 0;
  std::uint64_t seed = 0;
  double lhs0 = 0, lhs1 = 0, lhs2 = 0;  // weighted derivative terms by order
  double rhs = 0;                       // weighted ||L v||^2
  double ratio = 0;
};

enum class CarlemanMode { Frozen, Variable };

// Per-t-row unweighted square sums, reusable across k.
struct FieldNorms {
  RVec s0, s1, s2, sL;
};
FieldNorms field_norms(const TestField& v, const TestField& Lv, const Grid& g, bool with_second);
BenchPoint ratio_from_norms(const FieldNorms& fn, double k, const Grid& g, CarlemanMode mode);

BenchPoint carleman_ratio(const SymbolTable& sym, const TestField& v, const Grid& g, double k);
BenchPoint carleman_ratio(const SystemSpec& spec, const TestField& v, const Grid& g, double k);

struct CarlemanReport {
  CarlemanMode mode = CarlemanMode::Frozen;
  double T = 0;
  std::vector<double> k_list;
  std::vector<BenchPoint> points;  // k-major, battery fields inner
  double fitted_c = 0;             // max ratio
  double stability = 0;            // max / median
  bool stable = false;             // stability <= 4
};

struct BatteryField {
  TestField v;
  std::uint64_t seed = 0;
};

// Seeded random battery supported per the slab contract.
std::vector<BatteryField> make_battery(const Grid& g, int N, const std::vector<std::uint64_t>& seeds);

CarlemanReport k_sweep(const SymbolTable& sym, const std::vector<BatteryField>& battery,
                       const Grid& g, const std::vector<double>& k_list);
CarlemanReport k_sweep(const SystemSpec& spec, const std::vector<BatteryField>& battery,
                       const Grid& g, const std::vector<double>& k_list);

}  // namespace symfac
