#include "symfac/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace symfac {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : Error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}

ExprPtr expr_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Number;
  e->number = v;
  return e;
}

ExprPtr expr_x(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarX;
  e->index = index;
  return e;
}

ExprPtr expr_xi(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarXi;
  e->index = index;
  return e;
}

ExprPtr expr_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr expr_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Neg;
  e->a = std::move(a);
  return e;
}

ExprPtr expr_pow(ExprPtr a, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->exponent = exponent;
  e->a = std::move(a);
  return e;
}

ExprPtr expr_unary(ExprKind kind, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->a = std::move(a);
  return e;
}

namespace {

class Parser {
 public:
  Parser(std::string_view src, const VarScope& scope) : src_(src), scope_(scope) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  const VarScope& scope_;

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    bool negate = false;
    skip_ws();
    if (eat('+')) {
    } else if (eat('-')) {
      negate = true;
    }
    ExprPtr e = term();
    if (negate) e = expr_neg(std::move(e));
    for (;;) {
      if (eat('+')) {
        e = expr_binary(ExprKind::Add, std::move(e), term());
      } else if (eat('-')) {
        e = expr_binary(ExprKind::Sub, std::move(e), term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) {
        e = expr_binary(ExprKind::Mul, std::move(e), factor());
      } else if (eat('/')) {
        e = expr_binary(ExprKind::Div, std::move(e), factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    ExprPtr e = base();
    if (eat('^')) {
      skip_ws();
      std::size_t at = pos_;
      int sign = 1;
      if (eat('+')) {
      } else if (eat('-')) {
        sign = -1;
      }
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == start) throw ParseError("expected integer exponent after '^'", at);
      int value = 0;
      auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
      if (res.ec != std::errc()) throw ParseError("exponent out of range", start);
      e = expr_pow(std::move(e), sign * value);
    }
    return e;
  }

  ExprPtr base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == digits) pos_ = mark;  // "2e" is the number 2 followed by junk
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("malformed number", start);
    return expr_number(value);
  }

  ExprPtr ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view word = src_.substr(start, pos_ - start);
    if (word == "sqrt" || word == "abs") {
      if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
      ExprPtr arg = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return expr_unary(word == "sqrt" ? ExprKind::Sqrt : ExprKind::Abs, std::move(arg));
    }
    if (word != "x" && word != "xi")
      throw ParseError("unknown identifier '" + std::string(word) + "'", start);
    std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits)
      throw ParseError("variable needs an index, e.g. " + std::string(word) + "1", start);
    int index = 0;
    auto res = std::from_chars(src_.data() + digits, src_.data() + pos_, index);
    if (res.ec != std::errc()) throw ParseError("variable index out of range", digits);
    if (word == "x") {
      if (!scope_.allow_x) throw ParseError("coordinate variables not allowed here", start);
      if (index < 1 || index > scope_.n)
        throw ParseError("x index must be in 1.." + std::to_string(scope_.n), start);
      return expr_x(index);
    }
    if (!scope_.allow_xi) throw ParseError("covector variables not allowed here", start);
    if (index < scope_.xi_lo || index > scope_.n)
      throw ParseError("xi index must be in " + std::to_string(scope_.xi_lo) + ".." +
                           std::to_string(scope_.n),
                       start);
    return expr_xi(index);
  }
};

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_atom(const Expr& e) {
  return e.kind == ExprKind::Number || e.kind == ExprKind::VarX || e.kind == ExprKind::VarXi ||
         e.kind == ExprKind::Sqrt || e.kind == ExprKind::Abs;
}

}  // namespace

ExprPtr parse_expression(std::string_view source, const VarScope& scope) {
  return Parser(source, scope).run();
}

double eval(const Expr& e, const RVec& x, const RVec& xi) {
  switch (e.kind) {
    case ExprKind::Number:
      return e.number;
    case ExprKind::VarX:
      return x(e.index - 1);
    case ExprKind::VarXi:
      return xi(e.index - 1);
    case ExprKind::Add:
      return eval(*e.a, x, xi) + eval(*e.b, x, xi);
    case ExprKind::Sub:
      return eval(*e.a, x, xi) - eval(*e.b, x, xi);
    case ExprKind::Mul:
      return eval(*e.a, x, xi) * eval(*e.b, x, xi);
    case ExprKind::Div: {
      double num = eval(*e.a, x, xi);
      double den = eval(*e.b, x, xi);
      if (den == 0.0) throw EvalError("division by zero in " + to_string(e));
      return num / den;
    }
    case ExprKind::Neg:
      return -eval(*e.a, x, xi);
    case ExprKind::Pow: {
      double v = eval(*e.a, x, xi);
      if (v == 0.0 && e.exponent < 0)
        throw EvalError("zero base with negative exponent in " + to_string(e));
      return std::pow(v, e.exponent);
    }
    case ExprKind::Sqrt: {
      double v = eval(*e.a, x, xi);
      if (v < 0.0) throw EvalError("sqrt of negative value in " + to_string(e));
      return std::sqrt(v);
    }
    case ExprKind::Abs:
      return std::abs(eval(*e.a, x, xi));
  }
  throw EvalError("corrupt expression node");
}

bool depends_on_x(const Expr& e) {
  if (e.kind == ExprKind::VarX) return true;
  if (e.a && depends_on_x(*e.a)) return true;
  return e.b && depends_on_x(*e.b);
}

bool depends_on_xi(const Expr& e) {
  if (e.kind == ExprKind::VarXi) return true;
  if (e.a && depends_on_xi(*e.a)) return true;
  return e.b && depends_on_xi(*e.b);
}

ExprPtr substitute_x(const ExprPtr& e, int index, const ExprPtr& replacement) {
  if (!e) return e;
  if (e->kind == ExprKind::VarX && e->index == index) return replacement;
  ExprPtr a = substitute_x(e->a, index, replacement);
  ExprPtr b = substitute_x(e->b, index, replacement);
  if (a == e->a && b == e->b) return e;
  auto out = std::make_shared<Expr>(*e);
  out->a = std::move(a);
  out->b = std::move(b);
  return out;
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Number:
      if (e.number < 0.0 || (e.number == 0.0 && std::signbit(e.number)))
        return "(-" + fmt_number(-e.number) + ")";
      return fmt_number(e.number);
    case ExprKind::VarX:
      return "x" + std::to_string(e.index);
    case ExprKind::VarXi:
      return "xi" + std::to_string(e.index);
    case ExprKind::Add:
      return "(" + to_string(*e.a) + "+" + to_string(*e.b) + ")";
    case ExprKind::Sub:
      return "(" + to_string(*e.a) + "-" + to_string(*e.b) + ")";
    case ExprKind::Mul:
      return "(" + to_string(*e.a) + "*" + to_string(*e.b) + ")";
    case ExprKind::Div:
      return "(" + to_string(*e.a) + "/" + to_string(*e.b) + ")";
    case ExprKind::Neg:
      return "(-" + to_string(*e.a) + ")";
    case ExprKind::Pow: {
      std::string body = to_string(*e.a);
      if (!is_atom(*e.a)) body = "(" + body + ")";  // keep "(..)^k" reparsable
      std::string exp = std::to_string(e.exponent);
      return body + "^" + exp;
    }
    case ExprKind::Sqrt:
      return "sqrt(" + to_string(*e.a) + ")";
    case ExprKind::Abs:
      return "abs(" + to_string(*e.a) + ")";
  }
  return "?";
}

}  // namespace symfac
