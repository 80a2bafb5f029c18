#pragma once

#include <functional>
#include <vector>

#include "symfac/types.hpp"

namespace symfac {

// Circle in the complex plane carrying a trapezoid quadrature rule.
struct ContourSpec {
  Complex center;
  double radius = 0.0;
  int node_count = 64;
  double margin = 0.0;  // clearance between the circle and the nearest root / real axis
};

// (2*pi*i)^{-1} * closed contour integral of f over the circle, trapezoid
// rule (spectrally accurate for integrands analytic near the circle).
Mat contour_integral(const ContourSpec& c, const std::function<Mat(Complex)>& f);

// Circle around all strictly-upper-half-plane roots, separated from their
// conjugates; it stays above the real axis when the geometry allows and
// otherwise only guarantees that every enclosed root does. Throws
// AssumptionError when the two groups cannot be separated.
ContourSpec choose_contour_upper(const std::vector<Complex>& roots);

// Circle around the root cluster nearest `center`, excluding all other
// roots. Cluster membership uses the relative gap tol.cluster.
ContourSpec choose_contour_cluster(const std::vector<Complex>& roots, Complex center,
                                   double cluster_tol);

}  // namespace symfac
