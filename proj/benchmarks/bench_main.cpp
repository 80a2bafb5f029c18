#include <benchmark/benchmark.h>

#include <random>

#include "symfac/audit.hpp"
#include "symfac/builtin.hpp"
#include "symfac/factor.hpp"
#include "symfac/parametrix.hpp"
#include "symfac/symbol.hpp"

namespace {

using namespace symfac;

QuadraticPencil random_pencil(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  RMat Y(N, N), W(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Y(i, j) = dist(rng);
      W(i, j) = dist(rng);
    }
  RMat Z = W * W.transpose() + 0.5 * RMat::Identity(N, N);
  Mat S1 = Y.cast<Complex>() + Complex(0, 1) * Z.cast<Complex>();
  QuadraticPencil p;
  p.N = N;
  p.H1 = -(S1 + S1.adjoint());
  p.H2 = S1.adjoint() * S1;
  return p;
}

void BM_riesz_S1(benchmark::State& state) {
  int N = static_cast<int>(state.range(0));
  QuadraticPencil p = random_pencil(N, 42);
  ContourSpec c = choose_contour_upper(pencil_roots(p));
  Tolerances tol;
  for (auto _ : state) {
    RieszResult r = riesz_S1(p, c, tol);
    benchmark::DoNotOptimize(r.S1);
  }
}
BENCHMARK(BM_riesz_S1)->Arg(2)->Arg(4)->Arg(6);

void BM_eigen_structure(benchmark::State& state) {
  int N = static_cast<int>(state.range(0));
  QuadraticPencil p = random_pencil(N, 7);
  PencilFactorization fac = factor_pencil(p);
  Tolerances tol;
  for (auto _ : state) {
    SpectralReport r = eigen_structure(fac.B, tol);
    benchmark::DoNotOptimize(r.max_projection_norm);
  }
}
BENCHMARK(BM_eigen_structure)->Arg(2)->Arg(4)->Arg(6);

void BM_kernel_eval(benchmark::State& state) {
  SystemSpec spec = builtin_system("example1");
  Tolerances tol;
  RVec x0 = spec.center();
  GammaData gd = gamma_bound(spec, x0, 128, tol);
  double k = 1000, T = 0.1;
  RVec xi(1);
  xi << k * T;
  QuadraticPencil p = pencil_at(spec, x0, xi, tol);
  PencilFactorization fac = factor_pencil(p, tol);
  FrozenKernel fk = make_frozen_kernel(fac, gd, k, T, xi, tol);
  double x1 = 0.2 * T, y1 = 0.4 * T;
  for (auto _ : state) {
    KernelSample s = fk.eval(x1, y1, tol);
    benchmark::DoNotOptimize(s.method_a_norm);
  }
}
BENCHMARK(BM_kernel_eval);

}  // namespace

BENCHMARK_MAIN();
