#include "symfac/builtin.hpp"

#include <utility>

namespace symfac {

namespace {

struct Builtin {
  const char* name;
  const char* description;
  const char* source;
};

// 2x2 conormal factor pair with constant coefficients; the pencil does not
// commute and the factorization is exactly recoverable in closed form.
constexpr const char* kExample1 = R"json({
  "n": 2,
  "N": 2,
  "kind": "YZ",
  "YZ": {
    "Y": [["2*xi2", "-xi2"], ["xi2", "5*xi2"]],
    "Z": [["2*abs(xi2)", "abs(xi2)"], ["abs(xi2)", "abs(xi2)"]]
  }
})json";

// Diagonal perturbation of the first factor pair, q=1/4, eps=(1, 1/2);
// the admissibility margins |q + 3/(eps1+eps2)| and |q - 1/(eps1-eps2)|
// stay away from zero.
constexpr const char* kExample2 = R"json({
  "n": 2,
  "N": 2,
  "kind": "YZ",
  "YZ": {
    "Y": [["2*xi2", "-xi2"], ["xi2", "5*xi2"]],
    "Z": [["2.25*abs(xi2)", "abs(xi2)"], ["abs(xi2)", "1.125*abs(xi2)"]]
  }
})json";

// 3x3 block-triangular factor pair in two transverse frequencies; the
// leading eigenvalue is xi2+xi3 + i sqrt(3 xi2^2 + 2 xi2 xi3 + xi3^2).
constexpr const char* kExample3 = R"json({
  "n": 3,
  "N": 3,
  "kind": "YZ",
  "YZ": {
    "Y": [["xi2+xi3", "0", "0"],
          ["0", "3*xi2-xi3", "xi2+xi3"],
          ["0", "-xi2-xi3", "-4*xi3"]],
    "Z": [["sqrt(3*xi2^2+2*xi2*xi3+xi3^2)", "0", "0"],
          ["0", "2*sqrt(3*xi2^2+2*xi2*xi3+xi3^2)", "sqrt(3*xi2^2+2*xi2*xi3+xi3^2)"],
          ["0", "sqrt(3*xi2^2+2*xi2*xi3+xi3^2)", "sqrt(3*xi2^2+2*xi2*xi3+xi3^2)"]]
  }
})json";

// Commuting pencil whose eigenvector bundle winds around the origin of the
// (x2, x3) plane, so no continuous diagonalization crosses x2 = x3 = 0.
constexpr const char* kExample4 = R"json({
  "n": 3,
  "N": 3,
  "kind": "YZ",
  "YZ": {
    "Y": [["0", "0", "x2*xi2"],
          ["0", "0", "x3*xi3"],
          ["x2*xi2", "x3*xi3", "0"]],
    "Z": [["sqrt(xi2^2+xi3^2)", "0", "0"],
          ["0", "sqrt(xi2^2+xi3^2)", "0"],
          ["0", "0", "sqrt(xi2^2+xi3^2)"]]
  }
})json";

// Pencil-form input: coefficients of the balanced conjugation of a
// non-commuting 3x3 system, Lipschitz in x near the origin. The factor
// recovered from the contour integrals is exactly Y = A^{-1/2} E A^{1/2},
// Z = A sqrt(xi2^2+xi3^2) with diagonal A and symmetric E.
constexpr const char* kExample5 = R"json({
  "n": 3,
  "N": 3,
  "kind": "pencil",
  "pencil": {
    "H1": [["0", "0", "0"],
           ["0", "-2*x2*xi2", "-2*x3*xi3/sqrt(1-x2^4*x3^4)"],
           ["0", "-2*x3*xi3/sqrt(1-x2^4*x3^4)", "2*x2*xi2"]],
    "H2": [["xi2^2+xi3^2", "0", "0"],
           ["0",
            "x2^2*xi2^2+x3^2*xi3^2*(1+x2^2*x3^2)/(1-x2^2*x3^2)+(xi2^2+xi3^2)*(1+x2^2*x3^2)^2",
            "-2*x2^3*x3^3*xi2*xi3/sqrt(1-x2^4*x3^4)"],
           ["0",
            "-2*x2^3*x3^3*xi2*xi3/sqrt(1-x2^4*x3^4)",
            "x2^2*xi2^2+x3^2*xi3^2*(1-x2^2*x3^2)/(1+x2^2*x3^2)+(xi2^2+xi3^2)*(1-x2^2*x3^2)^2"]]
  },
  "domain": {"lo": [-1, -0.5, -0.5], "hi": [1, 0.5, 0.5]}
})json";

// Two decoupled Laplacians in three variables: S1 = i|xi'| I.
constexpr const char* kIsotropic = R"json({
  "n": 3,
  "N": 2,
  "kind": "tensor",
  "tensor": {
    "C": [
      {"alpha": 1, "beta": 1, "j": 1, "l": 1, "expr": "1"},
      {"alpha": 1, "beta": 1, "j": 2, "l": 2, "expr": "1"},
      {"alpha": 1, "beta": 1, "j": 3, "l": 3, "expr": "1"},
      {"alpha": 2, "beta": 2, "j": 1, "l": 1, "expr": "1"},
      {"alpha": 2, "beta": 2, "j": 2, "l": 2, "expr": "1"},
      {"alpha": 2, "beta": 2, "j": 3, "l": 3, "expr": "1"}
    ]
  }
})json";

// Plane isotropic elasticity with unit Lame constants:
// M(zeta) = (lambda+mu) zeta zeta^T + mu |zeta|^2 I.
constexpr const char* kIsoelastic = R"json({
  "n": 2,
  "N": 2,
  "kind": "tensor",
  "tensor": {
    "C": [
      {"alpha": 1, "beta": 1, "j": 1, "l": 1, "expr": "3"},
      {"alpha": 1, "beta": 1, "j": 2, "l": 2, "expr": "1"},
      {"alpha": 1, "beta": 2, "j": 1, "l": 2, "expr": "2"},
      {"alpha": 2, "beta": 1, "j": 2, "l": 1, "expr": "2"},
      {"alpha": 2, "beta": 2, "j": 1, "l": 1, "expr": "1"},
      {"alpha": 2, "beta": 2, "j": 2, "l": 2, "expr": "3"}
    ]
  }
})json";

constexpr Builtin kBuiltins[] = {
    {"example1", "constant 2x2 factor pair, non-commuting pencil", kExample1},
    {"example2", "perturbed 2x2 factor pair, q=1/4, eps=(1, 1/2)", kExample2},
    {"example3", "3x3 block-triangular factor pair, two transverse frequencies", kExample3},
    {"example4", "commuting 3x3 pencil with a winding eigenvector bundle", kExample4},
    {"example5", "non-commuting 3x3 pencil input, Lipschitz near the origin", kExample5},
    {"isotropic", "decoupled Laplacians, S1 = i|xi'| I", kIsotropic},
    {"isoelastic", "plane isotropic elasticity, unit Lame constants; its double root i|xi'| is "
                   "non-semisimple, so the conormal audit reports the defect",
     kIsoelastic},
};

const Builtin* find(const std::string& name) {
  for (const Builtin& b : kBuiltins)
    if (name == b.name) return &b;
  return nullptr;
}

}  // namespace

SystemSpec builtin_system(const std::string& name) {
  return load_system(builtin_source(name));
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const Builtin& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

std::string builtin_description(const std::string& name) {
  const Builtin* b = find(name);
  if (!b) throw Error("unknown builtin system: " + name);
  return b->description;
}

std::string builtin_source(const std::string& name) {
  const Builtin* b = find(name);
  if (!b) throw Error("unknown builtin system: " + name);
  return b->source;
}

}  // namespace symfac
