#include "symfac/holmgren.hpp"

namespace symfac {

SystemSpec holmgren_pushforward(const SystemSpec& spec, const HolmgrenParams& params) {
  if (spec.kind != SystemKind::Tensor)
    throw Error("holmgren_pushforward needs a tensor-kind system");
  const double kappa = params.kappa;
  if (kappa < 0.0) throw Error("kappa must be nonnegative");

  SystemSpec out;
  out.n = spec.n;
  out.N = spec.N;
  out.kind = SystemKind::Tensor;
  out.lo = spec.lo;
  out.hi = spec.hi;
  out.C.assign(spec.C.size(), nullptr);

  // inverse map: x1 = x~1 - kappa |x~'|^2
  ExprPtr x1_back = expr_x(1);
  if (kappa != 0.0) {
    ExprPtr sq;
    for (int j = 2; j <= spec.n; ++j) {
      ExprPtr t = expr_pow(expr_x(j), 2);
      sq = sq ? expr_binary(ExprKind::Add, sq, t) : t;
    }
    x1_back = expr_binary(ExprKind::Sub, expr_x(1),
                          expr_binary(ExprKind::Mul, expr_number(kappa), sq));
  }

  auto pulled = [&](int al, int be, int j, int l) -> ExprPtr {
    const ExprPtr& e = spec.tensor_entry(al, be, j, l);
    if (!e) return nullptr;
    return substitute_x(e, 1, x1_back);
  };

  // d_j x~_1: 1 for j=1, 2 kappa x_j otherwise (x_j = x~_j for j >= 2);
  // d_j x~_p = delta_{jp} for p >= 2.
  auto slope = [&](int j) {
    return expr_binary(ExprKind::Mul, expr_number(2.0 * kappa), expr_x(j));
  };
  auto add_to = [](ExprPtr& acc, ExprPtr term) {
    if (!term) return;
    acc = acc ? expr_binary(ExprKind::Add, acc, term) : term;
  };

  for (int al = 1; al <= spec.N; ++al)
    for (int be = 1; be <= spec.N; ++be)
      for (int p = 1; p <= spec.n; ++p)
        for (int q = 1; q <= spec.n; ++q) {
          ExprPtr acc;
          if (p >= 2 && q >= 2) {
            acc = pulled(al, be, p, q);
          } else if (p == 1 && q >= 2) {
            add_to(acc, pulled(al, be, 1, q));
            if (kappa != 0.0)
              for (int j = 2; j <= spec.n; ++j) {
                ExprPtr c = pulled(al, be, j, q);
                if (c) add_to(acc, expr_binary(ExprKind::Mul, slope(j), c));
              }
          } else if (p >= 2 && q == 1) {
            add_to(acc, pulled(al, be, p, 1));
            if (kappa != 0.0)
              for (int l = 2; l <= spec.n; ++l) {
                ExprPtr c = pulled(al, be, p, l);
                if (c) add_to(acc, expr_binary(ExprKind::Mul, c, slope(l)));
              }
          } else {
            add_to(acc, pulled(al, be, 1, 1));
            if (kappa != 0.0) {
              for (int j = 2; j <= spec.n; ++j) {
                ExprPtr c = pulled(al, be, j, 1);
                if (c) add_to(acc, expr_binary(ExprKind::Mul, slope(j), c));
              }
              for (int l = 2; l <= spec.n; ++l) {
                ExprPtr c = pulled(al, be, 1, l);
                if (c) add_to(acc, expr_binary(ExprKind::Mul, c, slope(l)));
              }
              for (int j = 2; j <= spec.n; ++j)
                for (int l = 2; l <= spec.n; ++l) {
                  ExprPtr c = pulled(al, be, j, l);
                  if (c)
                    add_to(acc, expr_binary(ExprKind::Mul,
                                            expr_binary(ExprKind::Mul, slope(j), c), slope(l)));
                }
            }
          }
          out.tensor_entry(al, be, p, q) = acc;
        }
  return out;
}

}  // namespace symfac
