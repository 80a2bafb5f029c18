#pragma once

#include <string>
#include <vector>

#include "symfac/expr.hpp"
#include "symfac/types.hpp"

namespace symfac {

enum class SystemKind { Tensor, Pencil, YZ };

std::string kind_name(SystemKind k);

// A system of size N in n variables, given either as a coefficient tensor
// C^{jl}_{ab}(x), as pencil coefficient matrices H1(x, xi'), H2(x, xi'), or
// as a factor pair Y(x, xi'), Z(x, xi'). Matrix entries are expression
// trees; absent tensor entries are zero.
struct SystemSpec {
  int n = 0;
  int N = 0;
  SystemKind kind = SystemKind::Tensor;

  std::vector<ExprPtr> C;       // N*N*n*n, may hold nulls (zero entries)
  std::vector<ExprPtr> H1, H2;  // N*N row-major
  std::vector<ExprPtr> Y, Z;    // N*N row-major

  RVec lo, hi;  // coordinate box, defaults to [-1,1]^n

  const ExprPtr& tensor_entry(int alpha, int beta, int j, int l) const;
  ExprPtr& tensor_entry(int alpha, int beta, int j, int l);

  RVec center() const { return 0.5 * (lo + hi); }
};

// M_{ab}(x) = sum_{j,l} C^{jl}_{ab}(x) a_j b_l for covectors a, b.
RMat contract(const SystemSpec& spec, const RVec& x, const RVec& a, const RVec& b);

// Row-major N*N entry list evaluated at (x, xi). Null entries read as zero.
RMat eval_matrix(const std::vector<ExprPtr>& entries, int N, const RVec& x, const RVec& xi);

SystemSpec load_system(const std::string& json_text);
SystemSpec load_system_file(const std::string& path);

// Serializes in the input schema; load_system(save_system(s)) reproduces s
// up to expression-tree identity.
std::string save_system(const SystemSpec& spec);

}  // namespace symfac
