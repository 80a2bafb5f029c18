#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "symfac/types.hpp"

namespace symfac {

enum class ExprKind { Number, VarX, VarXi, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree node. Subtrees are shared, which keeps
// coordinate substitution cheap.
struct Expr {
  ExprKind kind;
  double number = 0.0;  // Number
  int index = 0;        // VarX / VarXi, 1-based
  int exponent = 0;     // Pow
  ExprPtr a, b;         // operands; b empty for unary nodes
};

ExprPtr expr_number(double v);
ExprPtr expr_x(int index);
ExprPtr expr_xi(int index);
ExprPtr expr_binary(ExprKind kind, ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_pow(ExprPtr a, int exponent);
ExprPtr expr_unary(ExprKind kind, ExprPtr a);  // Sqrt or Abs

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Which variables an entry may legally reference. x indices run 1..n when
// allowed; xi indices xi_lo..n (transverse-only data never sees xi1).
struct VarScope {
  int n = 0;
  bool allow_x = true;
  bool allow_xi = true;
  int xi_lo = 1;
};

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | ident | '(' expr ')' | ('sqrt'|'abs') '(' expr ')'
// Errors carry the byte offset of the offending token.
ExprPtr parse_expression(std::string_view source, const VarScope& scope);

// x and xi are full n-vectors; unused slots are ignored.
double eval(const Expr& e, const RVec& x, const RVec& xi);

bool depends_on_x(const Expr& e);
bool depends_on_xi(const Expr& e);

// Replaces every occurrence of x<index> by `replacement`. Untouched
// subtrees are shared with the input.
ExprPtr substitute_x(const ExprPtr& e, int index, const ExprPtr& replacement);

// Round-trippable rendering (parses back to an equivalent tree).
std::string to_string(const Expr& e);

}  // namespace symfac
