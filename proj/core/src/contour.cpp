#include "symfac/contour.hpp"

#include <algorithm>
#include <cmath>

namespace symfac {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Circle through the targets' enclosing disk and the excluded set: center at
// the target centroid, radius halfway between the farthest target and the
// nearest obstacle. The obstacle set is the excluded roots plus the real
// axis; when the axis alone blocks the split the circle may cross it (the
// integrand is analytic there), provided every target sits strictly above
// it by the root margin.
ContourSpec circle_between(const std::vector<Complex>& targets,
                           const std::vector<Complex>& excluded) {
  Complex c(0, 0);
  for (Complex t : targets) c += t;
  c /= static_cast<double>(targets.size());

  double rho = 0.0;
  for (Complex t : targets) rho = std::max(rho, std::abs(t - c));
  double droot = std::numeric_limits<double>::infinity();
  for (Complex e : excluded) droot = std::min(droot, std::abs(e - c));
  if (droot <= rho)
    throw AssumptionError("cannot separate the target roots from the rest by a circle");

  double dmin = std::min(droot, c.imag());
  if (dmin <= rho) {
    // axis-clearing circle impossible; fall back to root separation only
    double lift = std::numeric_limits<double>::infinity();
    for (Complex t : targets) lift = std::min(lift, t.imag());
    if (!(lift > 0.25 * (droot - rho)))
      throw AssumptionError("target roots sit too close to the real axis for a contour");
    dmin = droot;
  }

  ContourSpec spec;
  spec.center = c;
  spec.radius = 0.5 * (rho + dmin);
  spec.node_count = 64;
  spec.margin = 0.25 * (dmin - rho);
  return spec;
}

}  // namespace

Mat contour_integral(const ContourSpec& c, const std::function<Mat(Complex)>& f) {
  if (c.node_count < 4) throw Error("contour needs at least 4 nodes");
  Mat acc;
  for (int j = 0; j < c.node_count; ++j) {
    double th = 2.0 * kPi * j / c.node_count;
    Complex w = std::polar(1.0, th);
    Complex z = c.center + c.radius * w;
    // dz = i r e^{i theta} dtheta; the 1/(2 pi i) and the node weight fold in
    Mat term = f(z) * (c.radius * w / static_cast<double>(c.node_count));
    if (acc.size() == 0)
      acc = term;
    else
      acc += term;
  }
  return acc;
}

ContourSpec choose_contour_upper(const std::vector<Complex>& roots) {
  std::vector<Complex> up, rest;
  for (Complex r : roots) (r.imag() > 0 ? up : rest).push_back(r);
  if (up.empty()) throw AssumptionError("no roots in the open upper half plane");
  return circle_between(up, rest);
}

ContourSpec choose_contour_cluster(const std::vector<Complex>& roots, Complex center,
                                   double cluster_tol) {
  if (roots.empty()) throw Error("empty root list");
  double best = std::numeric_limits<double>::infinity();
  for (Complex r : roots) best = std::min(best, std::abs(r - center));
  double scale = 0.0;
  for (Complex r : roots) scale = std::max(scale, std::abs(r));
  double width = std::max(cluster_tol * std::max(scale, 1.0), best * (1.0 + 1e-12));

  std::vector<Complex> in, out;
  for (Complex r : roots) (std::abs(r - center) <= width ? in : out).push_back(r);
  if (in.empty()) throw Error("no root cluster near the requested center");
  return circle_between(in, out);
}

}  // namespace symfac
