#pragma once

#include <functional>
#include <vector>

#include "symfac/types.hpp"

namespace symfac {

struct QuadResult {
  Mat value;
  double error_estimate = 0;
  int panels = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 integration of a matrix-valued function on
// [a, b]. Panels split at the largest embedded error estimate until the
// total passes max(abs_tol, rel_tol * ||value||) or the panel budget runs
// out. break_hints pre-splits at known kinks or near-pole locations.
// Summation order is fixed (panels sorted by endpoint), so results are
// bit-reproducible for identical inputs.
QuadResult integrate_gk(const std::function<Mat(double)>& f, double a, double b, double rel_tol,
                        double abs_tol, int max_panels = 4000,
                        const std::vector<double>& break_hints = {});

// Scalar convenience wrapper.
Complex integrate_gk_scalar(const std::function<Complex(double)>& f, double a, double b,
                            double rel_tol, double abs_tol, int max_panels = 4000,
                            const std::vector<double>& break_hints = {});

}  // namespace symfac
