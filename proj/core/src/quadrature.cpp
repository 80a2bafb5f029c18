#include "symfac/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace symfac {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half; QUADPACK dqk15)
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Mat value;
  double err;
};

Panel eval_panel(const std::function<Mat(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Mat fc = f(mid);
  Mat kron = fc * kWgk[7];
  Mat gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    Mat lo = f(mid - half * kXgk[i]);
    Mat hi = f(mid + half * kXgk[i]);
    kron += (lo + hi) * kWgk[i];
    if (i % 2 == 1) gauss += (lo + hi) * kWg[i / 2];
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * half;
  p.err = (kron - gauss).norm() * half;
  if (!p.value.allFinite()) throw Error("integrand returned a non-finite value");
  return p;
}

}  // namespace

QuadResult integrate_gk(const std::function<Mat(double)>& f, double a, double b, double rel_tol,
                        double abs_tol, int max_panels, const std::vector<double>& break_hints) {
  if (!(a < b)) throw Error("integration interval is empty");
  std::vector<double> cuts{a};
  for (double h : break_hints)
    if (h > a && h < b) cuts.push_back(h);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    panels.push_back(eval_panel(f, cuts[i], cuts[i + 1]));

  auto total_norm = [&] {
    double n = 0;
    for (const Panel& p : panels) n += p.value.norm();
    return n;
  };

  QuadResult res;
  for (;;) {
    double err = 0;
    for (const Panel& p : panels) err += p.err;
    double target = std::max(abs_tol, rel_tol * total_norm());
    if (err <= target) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(panels.size()) >= max_panels) break;
    // split the worst panel (deterministic tie-break on the left endpoint)
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err ||
          (panels[i].err == panels[worst].err && panels[i].a < panels[worst].a))
        worst = i;
    if (panels[worst].err <= 0 || panels[worst].b - panels[worst].a < 1e-15 * (b - a)) break;
    Panel old = panels[worst];
    double mid = 0.5 * (old.a + old.b);
    panels[worst] = eval_panel(f, old.a, mid);
    panels.push_back(eval_panel(f, mid, old.b));
  }

  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    if (res.value.size() == 0)
      res.value = p.value;
    else
      res.value += p.value;
    res.error_estimate += p.err;
  }
  res.panels = static_cast<int>(panels.size());
  return res;
}

Complex integrate_gk_scalar(const std::function<Complex(double)>& f, double a, double b,
                            double rel_tol, double abs_tol, int max_panels,
                            const std::vector<double>& break_hints) {
  auto wrap = [&f](double t) {
    Mat m(1, 1);
    m(0, 0) = f(t);
    return m;
  };
  return integrate_gk(wrap, a, b, rel_tol, abs_tol, max_panels, break_hints).value(0, 0);
}

}  // namespace symfac
