#pragma once

#include <cstdint>
#include <vector>

#include "symfac/types.hpp"

namespace symfac {

// Uniform desk-scale grid on the slab (0,T) x [-R,R) with one transverse
// axis (the operator-level experiments run with n=2). t is cell-centered;
// the transverse axis is periodic and differentiated spectrally, which is
// harmless because admissible fields vanish near |x| = r <= R/2.
struct Grid {
  double T = 0, r = 0, R = 0;
  int nt = 0, nx = 0;
  double dt = 0, dx = 0;
  RVec t;     // nt cell centers in (0, T)
  RVec x;     // nx nodes in [-R, R)
  RVec freq;  // FFT bin frequencies (standard order)
};

Grid build_grid(double T, double r, int nt, int nx);

// Derivatives of an nt x nx field (rows = t, cols = x).
Mat dt_field(const Grid& g, const Mat& f, int order);  // 4th-order FD, one-sided at edges
Mat dx_field(const Grid& g, const Mat& f, int order);  // spectral

// The same 4th-order stencil on a bare uniform axis with spacing h.
void fd_derivative(double h, const CVec& f, CVec& out, int order);

// Mixed partial with p, q in {0 = t, 1 = x}.
Mat dd_field(const Grid& g, const Mat& f, int p, int q);

// Row-wise transverse FFT (standard bin order) and its inverse.
Mat fft_rows(const Mat& f);
Mat ifft_rows(const Mat& f);

struct TestField {
  int N = 0;
  std::vector<Mat> comp;      // N fields of shape nt x nx
  double max_abs = 0;
  double support_defect = 0;  // max |v| outside {0<t<T/2, |x|<r}, relative
};

enum class FieldKind { Bump, Modulated, Random };

// Smooth fields compactly supported in {0 < t < T/2} x {|x| < r}: a plain
// bump, a bump modulated at transverse frequency xi_star, or a seeded
// random superposition under the same envelope.
TestField make_test_function(const Grid& g, int N, FieldKind kind, double xi_star = 0.0,
                             std::uint64_t seed = 0);

// The standard bump profile exp(-1/(1-s^2)) on |s|<1 (not normalized).
double bump_profile(double s);

// Smooth monotone step: 0 for u <= 0, 1 for u >= 1, C^infinity in between,
// built from e^{-1/u} so that smooth_step(u) + smooth_step(1-u) = 1.
double smooth_step(double u);

}  // namespace symfac
