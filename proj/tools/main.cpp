#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symfac/audit.hpp"
#include "symfac/bench.hpp"
#include "symfac/builtin.hpp"
#include "symfac/factor.hpp"
#include "symfac/grid.hpp"
#include "symfac/holmgren.hpp"
#include "symfac/parametrix.hpp"
#include "symfac/partition.hpp"
#include "symfac/report.hpp"
#include "symfac/sampling.hpp"
#include "symfac/symbol.hpp"
#include "symfac/system.hpp"

using namespace symfac;

namespace {

constexpr double kGoldenTol = 1e-9;

struct RunConfig {
  std::string command;
  std::string kind = "carleman-frozen";
  std::string input_path;
  std::string builtin;
  std::string out_path;
  std::uint64_t seed = 12345;
  std::vector<std::string> tol_specs;
  std::vector<std::string> at_specs;
  double xi2 = 1.0;
  double xi3 = 0.0;
  double holmgren = 0.0;
  bool has_holmgren = false;
  double T = 0.0;
  bool has_T = false;
  double r = 0.5;
  std::string k_list_spec;
  double mu = 8.0;
  std::string grid_spec;
  int samples = 64;
  int pair_grid = 16;
  int sphere = 32;
  int battery = 5;
  Tolerances tol;
};

std::string fmt(double v) { return format_number(v); }

std::string fmt(Complex z) {
  std::string s = fmt(z.real());
  s += z.imag() < 0 ? " - " : " + ";
  s += fmt(std::abs(z.imag())) + "i";
  return s;
}

std::string fmt(const RVec& v) {
  std::string s = "(";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v(i));
  }
  return s + ")";
}

void print_matrix(std::ostream& os, const std::string& name, const RMat& m) {
  os << name << ":\n";
  for (int r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (int c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << fmt(m(r, c));
    os << "]\n";
  }
}

void print_matrix(std::ostream& os, const std::string& name, const Mat& m) {
  os << name << ":\n";
  for (int r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (int c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << fmt(m(r, c));
    os << "]\n";
  }
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error("bad number '" + item + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw Error("empty number list '" + text + "'");
  return out;
}

void parse_grid_spec(const std::string& text, int* nt, int* nx) {
  auto pos = text.find('x');
  if (pos == std::string::npos) throw Error("grid must look like NTxNX, got '" + text + "'");
  try {
    *nt = std::stoi(text.substr(0, pos));
    *nx = std::stoi(text.substr(pos + 1));
  } catch (const std::exception&) {
    throw Error("grid must look like NTxNX, got '" + text + "'");
  }
  if (*nt < 8 || *nx < 8) throw Error("grid axes must have at least 8 cells");
}

void apply_tolerance_overrides(RunConfig& cfg) {
  for (const std::string& s : cfg.tol_specs) {
    auto pos = s.find('=');
    if (pos == std::string::npos) throw Error("--tol expects NAME=VALUE, got '" + s + "'");
    std::string name = s.substr(0, pos);
    double value = 0;
    try {
      value = std::stod(s.substr(pos + 1));
    } catch (const std::exception&) {
      throw Error("bad tolerance value in '" + s + "'");
    }
    if (!cfg.tol.set(name, value)) throw Error("unknown tolerance name '" + name + "'");
  }
}

RVec resolve_at(const SystemSpec& spec, const RunConfig& cfg) {
  RVec x = spec.center();
  for (const std::string& s : cfg.at_specs) {
    auto pos = s.find('=');
    if (pos == std::string::npos || s.size() < 4 || s[0] != 'x')
      throw Error("--at expects xJ=VALUE tokens, got '" + s + "'");
    int index = 0;
    double value = 0;
    try {
      index = std::stoi(s.substr(1, pos - 1));
      value = std::stod(s.substr(pos + 1));
    } catch (const std::exception&) {
      throw Error("--at expects xJ=VALUE tokens, got '" + s + "'");
    }
    if (index < 1 || index > spec.n)
      throw Error("--at index out of range for an n=" + std::to_string(spec.n) + " system");
    x(index - 1) = value;
  }
  return x;
}

RVec transverse_xi(const SystemSpec& spec, const RunConfig& cfg) {
  RVec xi = RVec::Zero(spec.n - 1);
  xi(0) = cfg.xi2;
  if (spec.n >= 3) xi(1) = cfg.xi3;
  return xi;
}

SystemSpec load_input(const RunConfig& cfg, bool apply_holmgren = true) {
  SystemSpec spec;
  if (!cfg.builtin.empty())
    spec = builtin_system(cfg.builtin);
  else if (!cfg.input_path.empty())
    spec = load_system_file(cfg.input_path);
  else
    throw Error("no input: pass --builtin NAME or --input PATH");
  if (apply_holmgren && cfg.has_holmgren) {
    if (spec.kind != SystemKind::Tensor)
      throw Error("the paraboloid change of variables needs tensor coefficients");
    spec = holmgren_pushforward(spec, HolmgrenParams{cfg.holmgren});
  }
  return spec;
}

void resolve_bench_defaults(RunConfig& cfg) {
  if (!cfg.has_T) {
    cfg.T = cfg.kind == "kernel" ? 0.1 : cfg.kind == "partition" ? 1.0 : 0.25;
    cfg.has_T = true;
  }
  if (cfg.grid_spec.empty() && cfg.kind != "kernel")
    cfg.grid_spec = cfg.kind == "apriori" ? "64x64" : cfg.kind == "partition" ? "256x256"
                                                                              : "128x128";
  if (cfg.k_list_spec.empty() && cfg.kind != "partition") {
    if (cfg.kind == "kernel") {
      cfg.k_list_spec = "100,1000,10000";
    } else {
      for (double m : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        if (!cfg.k_list_spec.empty()) cfg.k_list_spec += ",";
        cfg.k_list_spec += fmt(m / (cfg.T * cfg.T));
      }
    }
  }
}

std::vector<std::string> config_echo(const RunConfig& cfg) {
  std::vector<std::string> lines;
  bool bench = cfg.command == "bench";
  bool point = cfg.command == "audit" || cfg.command == "factor" || bench;
  lines.push_back("command=" + cfg.command + (bench ? " kind=" + cfg.kind : ""));
  if (!cfg.builtin.empty()) lines.push_back("builtin=" + cfg.builtin);
  if (!cfg.input_path.empty()) lines.push_back("input=" + cfg.input_path);
  if (point) lines.push_back("seed=" + std::to_string(cfg.seed));
  if (bench) {
    std::string geom = "T=" + fmt(cfg.T) + " r=" + fmt(cfg.r);
    if (!cfg.grid_spec.empty()) geom += " grid=" + cfg.grid_spec;
    if (cfg.kind == "partition") geom += " mu=" + fmt(cfg.mu);
    lines.push_back(geom);
    if (!cfg.k_list_spec.empty()) lines.push_back("k-list=" + cfg.k_list_spec);
  }
  if (point) {
    std::string at = "at=";
    for (const std::string& s : cfg.at_specs) at += s + " ";
    lines.push_back(at + "xi2=" + fmt(cfg.xi2) + " xi3=" + fmt(cfg.xi3));
  }
  if (cfg.command == "audit")
    lines.push_back("samples=" + std::to_string(cfg.samples) +
                    " sphere=" + std::to_string(cfg.sphere));
  if (bench && cfg.kind == "kernel")
    lines.push_back("pair-grid=" + std::to_string(cfg.pair_grid) +
                    " sphere=" + std::to_string(cfg.sphere));
  if (bench && (cfg.kind == "carleman-frozen" || cfg.kind == "carleman-variable"))
    lines.push_back("battery=" + std::to_string(cfg.battery));
  if (cfg.has_holmgren && point) lines.push_back("holmgren=" + fmt(cfg.holmgren));
  if (point) lines.push_back("tolerances=" + describe(cfg.tol));
  return lines;
}

void report_header(std::ostream& os, const RunConfig& cfg) {
  os << "tool: symfac " << version() << "\n[config]\n";
  for (const std::string& line : config_echo(cfg)) os << line << "\n";
  os << "\n";
}

void emit_report(const std::string& text, const RunConfig& cfg) {
  std::cout << text;
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw Error("cannot write report file: " + cfg.out_path);
    f << text;
  }
}

std::vector<std::string> csv_meta(const RunConfig& cfg) {
  std::vector<std::string> meta;
  meta.push_back("symfac " + std::string(version()));
  for (const std::string& line : config_echo(cfg)) meta.push_back(line);
  return meta;
}

void write_csv(const std::string& path, const std::vector<std::string>& meta,
               const std::string& header, const std::vector<std::string>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write CSV file: " + path);
  for (const std::string& m : meta) f << "# " << m << "\n";
  f << header << "\n";
  for (const std::string& r : rows) f << r << "\n";
}

std::string csv_path(const RunConfig& cfg, const std::string& tag) {
  if (!cfg.out_path.empty()) {
    std::string stem = cfg.out_path;
    auto dot = stem.rfind('.');
    auto slash = stem.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
      stem = stem.substr(0, dot);
    return stem + "-" + tag + ".csv";
  }
  return "symfac-" + tag + ".csv";
}

// Closed-form reference data for the embedded examples.
struct GoldenCheck {
  double worst = 0;
  std::vector<std::string> lines;

  void add(const std::string& what, double defect) {
    worst = std::max(worst, defect);
    lines.push_back("  " + what + ": defect " + fmt(defect));
  }
  void note(const std::string& what) { lines.push_back("  " + what); }
};

std::vector<Complex> eigs_of(const Mat& B) {
  Eigen::ComplexEigenSolver<Mat> es(B);
  if (es.info() != Eigen::Success) throw Error("eigen solve failed in golden comparison");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

double match_eigs(const std::vector<Complex>& expect, const Mat& B) {
  std::vector<Complex> got = eigs_of(B);
  std::vector<bool> used(got.size(), false);
  double worst = 0;
  for (Complex e : expect) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (used[i]) continue;
      double d = std::abs(got[i] - e);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

void golden_pair_examples(const std::string& name, double xi2, const QuadraticPencil& pen,
                          const PencilFactorization& fac, GoldenCheck& g) {
  double ax = std::abs(xi2);
  RMat Y0(2, 2), Z0(2, 2);
  Y0 << 2, -1, 1, 5;
  Z0 << 2, 1, 1, 1;
  double q = 0, e1 = 0, e2 = 0;
  if (name == "example2") {
    q = 0.25;
    e1 = 1.0;
    e2 = 0.5;
    Z0(0, 0) += q * e1;
    Z0(1, 1) += q * e2;
  }

  Mat S1e = (Y0 * xi2).cast<Complex>() + Complex(0, 1) * (Z0 * ax).cast<Complex>();
  g.add("recovered S1", (fac.S1 - S1e).norm());

  RMat H1e = RMat::Zero(2, 2);
  H1e(0, 0) = -4 * xi2;
  H1e(1, 1) = -10 * xi2;
  g.add("H1 closed form", (pen.H1 - H1e.cast<Complex>()).norm());

  RMat H2e(2, 2);
  if (name == "example1")
    H2e << 10, 6, 6, 28;
  else
    H2e << 10 + 4 * q * e1 + q * q * e1 * e1, 6 + q * e1 + q * e2, 6 + q * e1 + q * e2,
        28 + 2 * q * e2 + q * q * e2 * e2;
  H2e *= xi2 * xi2;
  g.add("Re H2 closed form", (pen.H2.real() - H2e).norm());

  std::vector<Complex> lam;
  if (name == "example1") {
    double s3 = std::sqrt(3.0);
    lam = {Complex((7 - s3) / 2 * xi2, (3 + s3) / 2 * ax),
           Complex((7 + s3) / 2 * xi2, (3 - s3) / 2 * ax)};
    g.add("Im H2 vanishes", pen.H2.imag().norm());
    Mat K = pen.H1 * pen.H2 - pen.H2 * pen.H1;
    Mat Ke = Mat::Zero(2, 2);
    Ke(0, 1) = Complex(36 * xi2 * xi2 * xi2, 0);
    Ke(1, 0) = -Ke(0, 1);
    g.add("commutator [H1,H2]", (K - Ke).norm());
    double s5 = std::sqrt(5.0);
    g.add("min eig Z", std::abs(fac.z_min_eig - (3 - s5) / 2 * ax));
  } else {
    double a = q * (e1 - e2);
    double b = a * a * a * a + 4 * a * a * a + 40 * a * a + 72 * a + 36;
    double c = std::sqrt(2.0) * std::sqrt(std::sqrt(b) - a * a - 2 * a);
    double base = 3 + 4 * q * e1 + q * q * e1 * e1 - 2 * q * e2 - q * q * e2 * e2;
    for (double s : {+1.0, -1.0}) {
      double re = (14 * xi2 - s * c * ax) / 4;
      double im = (base * ax + s * (c * xi2 / 12) * (std::sqrt(b) + a * a + 2 * a)) / (2 * (1 + a));
      lam.emplace_back(re, im);
    }
    double cross = std::sqrt(2.0) * q * (e1 + e2) * std::abs(xi2 * ax);
    g.add("Im H2 cross term magnitude", std::abs(pen.H2.imag().norm() - cross));
  }
  g.add("eig(B) closed form", match_eigs(lam, fac.B));
}

void golden_example3(double xi2, double xi3, const QuadraticPencil& pen,
                     const PencilFactorization& fac, GoldenCheck& g) {
  double w = std::sqrt(3 * xi2 * xi2 + 2 * xi2 * xi3 + xi3 * xi3);
  Complex lam1(xi2 + xi3, w);
  std::vector<Complex> got = eigs_of(fac.B);
  double best = std::numeric_limits<double>::infinity();
  for (Complex z : got) best = std::min(best, std::abs(z - lam1));
  g.add("lambda_1 closed form", best);

  RMat H1e = RMat::Zero(3, 3);
  H1e(0, 0) = -2 * xi2 - 2 * xi3;
  H1e(1, 1) = -6 * xi2 + 2 * xi3;
  H1e(2, 2) = 8 * xi3;
  g.add("H1 closed form", (pen.H1 - H1e.cast<Complex>()).norm());

  double h2_11 = (xi2 + xi3) * (xi2 + xi3) + w * w;
  g.add("H2(1,1) = |lambda_1|^2", std::abs(pen.H2(0, 0) - Complex(h2_11, 0)));

  if (xi3 == 0.0 && xi2 != 0.0) {
    // lower 2x2 block at xi3=0: trace 3 xi2 + 3 sqrt(3) |xi2| i,
    // discriminant tr^2 - 4 det = -10 xi2^2 + 6 sqrt(3) xi2 |xi2| i
    double s3 = std::sqrt(3.0);
    double ax = std::abs(xi2);
    Complex tr(3 * xi2, 3 * s3 * ax);
    Complex sq = std::sqrt(Complex(-10 * xi2 * xi2, 6 * s3 * xi2 * ax));
    std::vector<Complex> lam = {lam1, (tr + sq) / 2.0, (tr - sq) / 2.0};
    g.add("eig(B) closed form", match_eigs(lam, fac.B));
  } else {
    g.note("full eigenvalue set compared at xi3=0 only");
  }
}

void golden_example4(const RVec& x, double xi2, double xi3, const QuadraticPencil& pen,
                     const PencilFactorization& fac, const Tolerances& tol, GoldenCheck& g) {
  double r = std::hypot(xi2, xi3);
  double rx = std::hypot(x(1) * xi2, x(2) * xi3);
  std::vector<Complex> lam = {Complex(-rx, r), Complex(rx, r), Complex(0, r)};
  g.add("eig(B) closed form", match_eigs(lam, fac.B));

  CVec v3(3);
  v3 << Complex(x(2) * xi3, 0), Complex(-x(1) * xi2, 0), Complex(0, 0);
  if (v3.norm() > 0) {
    CVec d = fac.B * v3 - Complex(0, r) * v3;
    g.add("B v3 = i|xi'| v3", d.norm() / v3.norm());
  }

  double commut = 0;
  auto path = commutativity_path(pen, tol, &commut);
  g.add("pencil commutator", commut);
  if (path)
    g.add("commutative closed-form root vs B", (path->B - fac.B).norm() / fac.B.norm());
  else
    g.add("commutativity path available", 1.0);
}

void golden_example5(const RVec& x, double xi2, double xi3, const QuadraticPencil& pen,
                     const PencilFactorization& fac, GoldenCheck& g) {
  double r = std::hypot(xi2, xi3);
  double rx = std::hypot(x(1) * xi2, x(2) * xi3);
  double p2 = x(1) * x(1) * x(2) * x(2);
  Complex disc(rx * rx - r * r * p2 * p2, 2 * xi2 * r * x(1) * x(1) * x(1) * x(2) * x(2));
  Complex sq = std::sqrt(disc);
  std::vector<Complex> lam = {Complex(0, r), Complex(0, r) - sq, Complex(0, r) + sq};
  g.add("eig(B) closed form", match_eigs(lam, fac.B));

  g.add("H1(1,1) vanishes", std::abs(pen.H1(0, 0)));
  g.add("H2(1,1) = |xi'|^2", std::abs(pen.H2(0, 0) - Complex(r * r, 0)));

  if (x(1) * x(2) * xi2 * xi3 != 0.0) {
    Complex mid(xi2 * x(1), r * p2);
    for (double s : {-1.0, +1.0}) {
      CVec v(3);
      v << Complex(0, 0), mid + s * sq, Complex(xi3 * x(2), 0);
      Complex lv = Complex(0, r) + s * sq;
      g.add(std::string("eigenvector v") + (s < 0 ? "2" : "3"),
            (fac.B * v - lv * v).norm() / v.norm());
    }
  } else {
    g.note("eigenvector formulas compared on x2 x3 xi2 xi3 != 0 only");
  }
}

void golden_isotropic(const RVec& xi, const QuadraticPencil& pen, const PencilFactorization& fac,
                      GoldenCheck& g) {
  int N = fac.S1.rows();
  double r = xi.norm();
  Mat S1e = Complex(0, r) * Mat::Identity(N, N);
  g.add("S1 = i|xi'| I", (fac.S1 - S1e).norm());
  g.add("H1 vanishes", pen.H1.norm());
  g.add("H2 = |xi'|^2 I", (pen.H2 - Complex(r * r, 0) * Mat::Identity(N, N)).norm());
  g.add("eig(B) closed form", match_eigs({Complex(0, r), Complex(0, r)}, fac.B));
}

void golden_isoelastic(double xi2, const QuadraticPencil& pen, GoldenCheck& g) {
  RMat H1e(2, 2), H2e(2, 2);
  double s3 = std::sqrt(3.0);
  H1e << 0, 2 / s3, 2 / s3, 0;
  H1e *= xi2;
  H2e << 1.0 / 3.0, 0, 0, 3;
  H2e *= xi2 * xi2;
  g.add("H1 hand value", (pen.H1 - H1e.cast<Complex>()).norm());
  g.add("H2 hand value", (pen.H2 - H2e.cast<Complex>()).norm());
}

bool run_golden(const RunConfig& cfg, const SystemSpec& spec, const RVec& x, const RVec& xi,
                const QuadraticPencil& pen, const PencilFactorization& fac, std::ostream& os) {
  if (cfg.builtin.empty() || cfg.has_holmgren) return true;
  GoldenCheck g;
  double xi2 = xi(0);
  double xi3 = spec.n >= 3 ? xi(1) : 0.0;
  if (cfg.builtin == "example1" || cfg.builtin == "example2")
    golden_pair_examples(cfg.builtin, xi2, pen, fac, g);
  else if (cfg.builtin == "example3")
    golden_example3(xi2, xi3, pen, fac, g);
  else if (cfg.builtin == "example4")
    golden_example4(x, xi2, xi3, pen, fac, cfg.tol, g);
  else if (cfg.builtin == "example5")
    golden_example5(x, xi2, xi3, pen, fac, g);
  else if (cfg.builtin == "isotropic")
    golden_isotropic(xi, pen, fac, g);
  else if (cfg.builtin == "isoelastic")
    golden_isoelastic(xi2, pen, g);
  else
    return true;

  bool pass = g.worst <= kGoldenTol;
  os << "[golden " << cfg.builtin << "]\n";
  for (const std::string& line : g.lines) os << line << "\n";
  os << "golden verdict: " << (pass ? "pass" : "FAIL") << " (worst defect " << fmt(g.worst)
     << ", tol " << fmt(kGoldenTol) << ")\n";
  return pass;
}

void print_audit_report(std::ostream& os, const AuditReport& ar, const std::string& title) {
  os << "[" << title << "]\n";
  os << "x: " << fmt(ar.x) << "\n";
  os << "samples: " << ar.samples.size() << " (refined " << ar.refined << ", skipped "
     << ar.skipped << ")\n";
  os << "sup projection norm: " << fmt(ar.sup_projection_norm) << " at xi' = " << fmt(ar.argmax_xi)
     << "\n";
  os << "all diagonalizable: " << (ar.all_diagonalizable ? "true" : "false") << "\n";
  os << "commutativity: " << (ar.commutative ? "true" : "false") << " (commutator norm "
     << fmt(ar.commutator_norm) << ")\n";
}

int cmd_audit(RunConfig& cfg) {
  SystemSpec spec = load_input(cfg, false);
  RVec x = resolve_at(spec, cfg);
  std::ostringstream os;
  report_header(os, cfg);
  os << "system: n=" << spec.n << " N=" << spec.N << " kind=" << kind_name(spec.kind) << "\n\n";

  bool basics_ok = true;
  if (spec.kind == SystemKind::Tensor) {
    std::vector<RVec> xs = box_samples(spec.lo, spec.hi, cfg.samples, cfg.seed);
    auto ab = sphere_pair_samples(spec.N, spec.n, std::max(8, cfg.samples / 4));
    BasicReport br = check_basic_assumptions(spec, xs, ab, cfg.tol);
    os << "[basic assumptions]\n";
    os << "symmetry: " << (br.symmetry_ok ? "ok" : "FAIL") << " (max defect "
       << fmt(br.max_symmetry_defect) << ")\n";
    os << "ellipticity delta: " << fmt(br.ellipticity_delta) << " over " << br.x_count << " x "
       << br.pair_count << " samples\n";
    os << "worst point: x=" << fmt(br.worst_x) << " zeta=" << fmt(br.worst_b)
       << " psi=" << fmt(br.worst_a) << "\n\n";
    basics_ok = br.symmetry_ok && br.ellipticity_delta > 0;
  } else {
    os << "[basic assumptions]\nnot applicable: " << kind_name(spec.kind)
       << " input carries no coefficient tensor\n\n";
  }

  AuditReport ar = audit_further_assumptions(spec, x, cfg.samples, cfg.tol);
  print_audit_report(os, ar, "conormal audit");

  // degeneracy detail at the reference direction
  RVec xi = transverse_xi(spec, cfg);
  QuadraticPencil pen = pencil_at(spec, x, xi, cfg.tol);
  PencilFactorization fac = factor_pencil(pen, cfg.tol);
  SpectralReport es = eigen_structure(fac.B, cfg.tol);
  os << "\n[spectrum at xi' = " << fmt(xi) << "]\n";
  std::string mask = "degeneracy mask: [";
  for (std::size_t i = 0; i < es.clusters.size(); ++i) {
    os << "lambda_" << i + 1 << " = " << fmt(es.clusters[i].lambda) << " (multiplicity "
       << es.clusters[i].multiplicity << ")\n";
    mask += (i ? ", " : "") + std::to_string(es.clusters[i].multiplicity);
  }
  os << mask << "]\n";
  os << "diagonalizable: " << (es.diagonalizable ? "true" : "false") << "\n";
  os << "max projection norm: " << fmt(es.max_projection_norm) << "\n";

  RVec xi_full = RVec::Zero(spec.n);
  xi_full.tail(spec.n - 1) = xi;
  bool ambiguous = false;
  int dims = kernel_dimension_sum(spec, x, xi_full, cfg.tol, &ambiguous);
  os << "kernel dimension sum over distinct roots: " << dims << " of " << 2 * spec.N
     << (ambiguous ? " (rank decision ambiguous)" : "") << "\n";

  bool holmgren_ok = true;
  if (cfg.has_holmgren) {
    SystemSpec bent = load_input(cfg, true);
    RVec xt = x;
    double s = 0;
    for (int i = 1; i < spec.n; ++i) s += x(i) * x(i);
    xt(0) = x(0) + cfg.holmgren * s;
    AuditReport ar2 = audit_further_assumptions(bent, xt, cfg.samples, cfg.tol);
    os << "\n";
    print_audit_report(os, ar2, "post-paraboloid re-audit, kappa=" + fmt(cfg.holmgren));
    holmgren_ok = ar2.all_diagonalizable;
  }

  bool pass = basics_ok && ar.all_diagonalizable && holmgren_ok;
  os << "\naudit verdict: " << (pass ? "pass" : "FAIL") << "\n";
  emit_report(os.str(), cfg);
  return pass ? 0 : 2;
}

int cmd_factor(RunConfig& cfg) {
  SystemSpec spec = load_input(cfg);
  RVec x = resolve_at(spec, cfg);
  RVec xi = transverse_xi(spec, cfg);
  std::ostringstream os;
  report_header(os, cfg);
  os << "system: n=" << spec.n << " N=" << spec.N << " kind=" << kind_name(spec.kind) << "\n";
  os << "frozen at x=" << fmt(x) << " xi'=" << fmt(xi) << "\n\n";

  QuadraticPencil pen = pencil_at(spec, x, xi, cfg.tol);
  PencilFactorization fac = factor_pencil(pen, cfg.tol);

  print_matrix(os, "H1", pen.H1);
  print_matrix(os, "H2", pen.H2);
  print_matrix(os, "S1", fac.S1);
  print_matrix(os, "Y", fac.Y);
  print_matrix(os, "Z", fac.Z);
  print_matrix(os, "B", fac.B);

  os << "pencil roots:";
  for (Complex z : fac.roots) os << " " << fmt(z) << ";";
  os << "\n";
  os << "contour: center " << fmt(fac.contour.center) << ", radius " << fmt(fac.contour.radius)
     << ", margin " << fmt(fac.contour.margin) << ", nodes " << fac.node_count << " (last delta "
     << fmt(fac.quad_delta) << ")\n";
  os << "min eig Z: " << fmt(fac.z_min_eig) << "  Z asymmetry: " << fmt(fac.z_asym) << "\n";
  os << "B symmetry defect: " << fmt(fac.b_sym_defect) << "\n";
  os << "root match: " << fmt(fac.root_match) << "\n";
  os << "residuals: H1 " << fmt(fac.residuals.h1) << ", H2 " << fmt(fac.residuals.h2)
     << ", conjugated pencil " << fmt(fac.residuals.calH) << ", half-plane margin "
     << fmt(fac.residuals.halfplane_margin) << "\n";

  SpectralReport es = eigen_structure(fac.B, cfg.tol);
  os << "\n[spectral structure of B]\n";
  for (std::size_t i = 0; i < es.clusters.size(); ++i)
    os << "lambda_" << i + 1 << " = " << fmt(es.clusters[i].lambda) << " (multiplicity "
       << es.clusters[i].multiplicity << ", |P| = " << fmt(es.clusters[i].P.norm()) << ")\n";
  os << "diagonalizable: " << (es.diagonalizable ? "true" : "false") << "\n";
  os << "projector algebra residual: " << fmt(es.algebra_residual) << "\n";
  os << "reconstruction residual: " << fmt(es.reconstruction_residual) << "\n\n";

  bool golden_ok = run_golden(cfg, spec, x, xi, pen, fac, os);
  emit_report(os.str(), cfg);
  return golden_ok ? 0 : 2;
}

int run_carleman(RunConfig& cfg, const SystemSpec& spec, std::ostream& os) {
  bool frozen = cfg.kind == "carleman-frozen";
  if (!frozen && (spec.kind != SystemKind::Tensor || spec.n != 2))
    throw Error("the variable-coefficient sweep needs a two-variable tensor system");
  double T = cfg.T;
  int nt = 128, nx = 128;
  parse_grid_spec(cfg.grid_spec, &nt, &nx);
  std::vector<double> k_list = parse_double_list(cfg.k_list_spec);

  Grid g = build_grid(T, cfg.r, nt, nx);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cfg.battery; ++i) seeds.push_back(cfg.seed + i);
  std::vector<BatteryField> battery = make_battery(g, spec.N, seeds);

  RVec x0 = resolve_at(spec, cfg);
  CarlemanReport rep;
  if (frozen) {
    SymbolTable sym = freeze_symbol(spec, x0, g, cfg.tol);
    rep = k_sweep(sym, battery, g, k_list);
  } else {
    rep = k_sweep(spec, battery, g, k_list);
  }

  std::vector<std::string> rows;
  const char* mode = frozen ? "frozen" : "variable";
  for (const BenchPoint& p : rep.points)
    rows.push_back(std::string(mode) + "," + fmt(p.k) + "," + fmt(T) + "," +
                   std::to_string(p.seed) + "," + fmt(p.lhs0) + "," + fmt(p.lhs1) + "," +
                   fmt(p.lhs2) + "," + fmt(p.rhs) + "," + fmt(p.ratio));
  std::string path = csv_path(cfg, "carleman");
  write_csv(path, csv_meta(cfg), "mode,k,T,seed,lhs0,lhs1,lhs2,rhs,ratio", rows);

  os << "[carleman sweep " << mode << "]\n";
  os << "grid: " << nt << "x" << nx << ", T=" << fmt(T) << ", r=" << fmt(cfg.r) << ", battery "
     << battery.size() << "\n";
  os << "k list:";
  for (double k : k_list) os << " " << fmt(k);
  os << "\nfitted c: " << fmt(rep.fitted_c) << "\n";
  os << "stability (max/median): " << fmt(rep.stability) << "\n";
  os << "verdict: " << (rep.stable ? "stable" : "UNSTABLE") << "\n";
  os << "csv: " << path << "\n";
  return rep.stable ? 0 : 3;
}

int run_kernel(RunConfig& cfg, const SystemSpec& spec, std::ostream& os) {
  double T = cfg.T;
  std::vector<double> k_list = parse_double_list(cfg.k_list_spec);
  RVec x0 = resolve_at(spec, cfg);
  std::vector<KernelSample> samples =
      kernel_sweep(spec, x0, k_list, T, cfg.pair_grid, cfg.sphere, cfg.tol);

  std::vector<std::string> rows;
  double worst_agreement = 0;
  for (const KernelSample& s : samples) {
    worst_agreement = std::max(worst_agreement, s.agreement);
    rows.push_back(fmt(s.k) + "," + fmt(s.T) + "," + fmt(s.x1) + "," + fmt(s.y1) + "," +
                   fmt(s.xi_prime.norm()) + "," + fmt(s.method_a_norm) + "," +
                   fmt(s.method_b_norm) + "," + fmt(s.bound_rhs) + "," +
                   fmt(s.method_a_norm / s.bound_rhs));
  }
  std::string path = csv_path(cfg, "kernel");
  write_csv(path, csv_meta(cfg),
            "k,T,x1,y1,|xi'|,method_a_norm,method_b_norm,bound_rhs,ratio", rows);

  os << "[kernel sweep]\n";
  os << "T=" << fmt(T) << ", pair grid " << cfg.pair_grid << "^2, sphere " << cfg.sphere
     << ", samples " << samples.size() << "\n";
  os << "worst dual-method disagreement: " << fmt(worst_agreement) << "\n";
  bool stable = true;
  for (int m_hat : {1, 2}) {
    KernelBoundReport kb = kernel_bound_check(samples, m_hat);
    os << "m_hat=" << m_hat << ": C_hat " << fmt(kb.C_hat) << ", spread " << fmt(kb.spread)
       << (kb.growing ? ", growing in k" : "") << "\n";
    for (std::size_t i = 0; i < kb.k_values.size(); ++i)
      os << "  k=" << fmt(kb.k_values[i]) << " C=" << fmt(kb.C_per_k[i]) << "\n";
    if (m_hat == 1 && kb.spread > 2.0) stable = false;
  }
  os << "verdict: " << (stable ? "stable" : "UNSTABLE") << "\n";
  os << "csv: " << path << "\n";
  return stable ? 0 : 3;
}

int run_apriori(RunConfig& cfg, const SystemSpec& spec, std::ostream& os) {
  double T = cfg.T;
  int nt = 64, nx = 64;
  parse_grid_spec(cfg.grid_spec, &nt, &nx);
  std::vector<double> k_list = parse_double_list(cfg.k_list_spec);

  Grid g = build_grid(T, cfg.r, nt, nx);
  RVec x0 = resolve_at(spec, cfg);
  SymbolTable sym = freeze_symbol(spec, x0, g, cfg.tol);
  TestField v = make_test_function(g, spec.N, FieldKind::Random, 0.0, cfg.seed);

  std::vector<std::string> rows;
  double min_bad = std::numeric_limits<double>::infinity();
  os << "[first-order factor check]\n";
  os << "grid: " << nt << "x" << nx << ", T=" << fmt(T) << ", r=" << fmt(cfg.r) << "\n";
  for (double k : k_list) {
    AprioriResult bad = apriori_check(sym, v, g, k, false);
    AprioriResult good = apriori_check(sym, v, g, k, true);
    min_bad = std::min(min_bad, bad.ratio);
    rows.push_back(fmt(k) + "," + fmt(T) + ",bad," + fmt(bad.lhs) + "," + fmt(bad.rhs) + "," +
                   fmt(bad.ratio));
    rows.push_back(fmt(k) + "," + fmt(T) + ",good," + fmt(good.lhs) + "," + fmt(good.rhs) + "," +
                   fmt(good.ratio));
    os << "k=" << fmt(k) << ": bad-factor ratio " << fmt(bad.ratio) << ", good-factor ratio "
       << fmt(good.ratio) << "\n";
  }
  std::string path = csv_path(cfg, "apriori");
  write_csv(path, csv_meta(cfg), "k,T,part,lhs,rhs,ratio", rows);
  os << "min bad-factor ratio: " << fmt(min_bad) << "\n";
  os << "csv: " << path << "\n";
  return 0;
}

int run_partition(RunConfig& cfg, const std::optional<SystemSpec>& spec, std::ostream& os) {
  double T = cfg.T;
  int nt = 256, nx = 256;
  parse_grid_spec(cfg.grid_spec, &nt, &nx);
  Grid g = build_grid(T, cfg.r, nt, nx);
  PartitionFamily fam = eta_family(cfg.mu, g);

  os << "[cube partition]\n";
  os << "mu=" << fmt(cfg.mu) << ", grid " << nt << "x" << nx << ", T=" << fmt(T) << ", R=" << fmt(g.R)
     << "\n";
  os << "members: " << fam.members.size() << "\n";
  os << "partition identity max defect: " << fmt(fam.sum_defect) << "\n";
  os << "lattice sum minimum: " << fmt(fam.theta_bar_min) << "\n";
  os << "derivative constants: c1 " << fmt(fam.c1) << ", c2 " << fmt(fam.c2) << ", c3 "
     << fmt(fam.c3) << "\n";
  os << "cover multiplicity max: " << fam.max_active << "\n";
  os << "support neighbors max: " << fam.support_neighbors << "\n";
  os << "induced weight scale k = 2 c2 mu^2: " << fmt(2 * fam.c2 * cfg.mu * cfg.mu) << "\n";

  std::vector<std::string> rows;
  for (const PartitionMember& m : fam.members)
    rows.push_back(fmt(cfg.mu) + "," + std::to_string(m.g1) + "," + std::to_string(m.g2) + "," +
                   fmt(m.t_center) + "," + fmt(m.x_center));
  std::string path = csv_path(cfg, "partition");
  write_csv(path, csv_meta(cfg), "mu,g1,g2,t_center,x_center", rows);
  os << "csv: " << path << "\n";

  if (spec && spec->kind == SystemKind::Tensor && spec->n == 2) {
    TestField v = make_test_function(g, spec->N, FieldKind::Bump);
    FrozenProbeReport pr = frozen_error_probe(*spec, v, cfg.mu, g, cfg.tol);
    os << "\n[frozen-coefficient cube probe]\n";
    os << "active cubes: " << pr.cubes.size() << "\n";
    os << "max total/majorant ratio: " << fmt(pr.max_ratio) << "\n";
    os << "max frozen ratio: " << fmt(pr.max_frozen_ratio) << ", max commutator ratio: "
       << fmt(pr.max_comm_ratio) << "\n";
    std::vector<std::string> crows;
    for (const CubeError& c : pr.cubes)
      crows.push_back(fmt(cfg.mu) + "," + std::to_string(c.g1) + "," + std::to_string(c.g2) + "," +
                      fmt(c.e_frozen) + "," + fmt(c.e_comm) + "," + fmt(c.e_total) + "," +
                      fmt(c.majorant));
    std::string cpath = csv_path(cfg, "cubes");
    write_csv(cpath, csv_meta(cfg), "mu,g1,g2,e_frozen,e_comm,e_total,majorant", crows);
    os << "csv: " << cpath << "\n";
  } else if (spec) {
    os << "frozen-coefficient probe skipped: needs a two-variable tensor system\n";
  }
  return 0;
}

int cmd_bench(RunConfig& cfg) {
  std::optional<SystemSpec> spec;
  if (!cfg.builtin.empty() || !cfg.input_path.empty()) spec = load_input(cfg);
  if (!spec && cfg.kind != "partition")
    throw Error("no input: pass --builtin NAME or --input PATH");

  resolve_bench_defaults(cfg);
  std::ostringstream os;
  report_header(os, cfg);
  if (spec)
    os << "system: n=" << spec->n << " N=" << spec->N << " kind=" << kind_name(spec->kind)
       << "\n\n";

  int rc = 0;
  if (cfg.kind == "carleman-frozen" || cfg.kind == "carleman-variable")
    rc = run_carleman(cfg, *spec, os);
  else if (cfg.kind == "kernel")
    rc = run_kernel(cfg, *spec, os);
  else if (cfg.kind == "apriori")
    rc = run_apriori(cfg, *spec, os);
  else if (cfg.kind == "partition")
    rc = run_partition(cfg, spec, os);
  else
    throw Error("unknown bench kind '" + cfg.kind +
                "' (want carleman-frozen, carleman-variable, kernel, apriori or partition)");

  emit_report(os.str(), cfg);
  return rc;
}

int cmd_examples(RunConfig& cfg) {
  std::ostringstream os;
  report_header(os, cfg);
  if (!cfg.builtin.empty()) {
    os << builtin_source(cfg.builtin) << "\n";
  } else {
    os << "built-in systems:\n";
    for (const std::string& name : builtin_names()) {
      SystemSpec s = builtin_system(name);
      os << "  " << name << ": n=" << s.n << " N=" << s.N << " kind=" << kind_name(s.kind) << ", "
         << builtin_description(name) << "\n";
    }
    os << "print one with: symfac examples --builtin NAME\n";
  }
  emit_report(os.str(), cfg);
  return 0;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", cfg.input_path, "system file (JSON schema, see examples command)");
    cmd->add_option("--builtin", cfg.builtin,
                    "built-in system: example1..example5, isotropic, isoelastic");
  }
  cmd->add_option("--out", cfg.out_path, "report file path (CSV side files use its stem)");
  cmd->add_option("--seed", cfg.seed, "battery and sampling seed");
  cmd->add_option("--tol", cfg.tol_specs, "tolerance override NAME=VALUE (repeatable)");
}

void add_point_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--at", cfg.at_specs, "freeze point coordinates, e.g. --at x2=0 x3=0");
  cmd->add_option("--xi2", cfg.xi2, "transverse frequency component 2");
  cmd->add_option("--xi3", cfg.xi3, "transverse frequency component 3");
  cmd->add_option("--holmgren", cfg.holmgren, "paraboloid bending parameter kappa")
      ->each([&cfg](const std::string&) { cfg.has_holmgren = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbol factorization and unique-continuation audit toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* audit = app.add_subcommand("audit", "check basic and conormal assumptions");
  add_common_flags(audit, cfg, true);
  add_point_flags(audit, cfg);
  audit->add_option("--samples", cfg.samples, "sphere / box sample count");

  CLI::App* factor = app.add_subcommand("factor", "factor the conormal pencil at one point");
  add_common_flags(factor, cfg, true);
  add_point_flags(factor, cfg);

  CLI::App* bench = app.add_subcommand("bench", "desk-scale numerical sweeps");
  add_common_flags(bench, cfg, true);
  add_point_flags(bench, cfg);
  bench->add_option("--kind", cfg.kind,
                    "carleman-frozen | carleman-variable | kernel | apriori | partition");
  bench->add_option("--T", cfg.T, "slab depth")->each([&cfg](const std::string&) {
    cfg.has_T = true;
  });
  bench->add_option("--r", cfg.r, "field support radius");
  bench->add_option("--k-list", cfg.k_list_spec, "comma-separated weight parameters");
  bench->add_option("--grid", cfg.grid_spec, "grid NTxNX");
  bench->add_option("--mu", cfg.mu, "partition scale");
  bench->add_option("--pair-grid", cfg.pair_grid, "kernel (x1,y1) lattice size per axis");
  bench->add_option("--sphere", cfg.sphere, "kernel sweep direction count");
  bench->add_option("--battery", cfg.battery, "carleman battery size");

  CLI::App* examples = app.add_subcommand("examples", "list or print built-in systems");
  add_common_flags(examples, cfg, false);
  examples->add_option("--builtin", cfg.builtin, "print this builtin's input text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    apply_tolerance_overrides(cfg);
    if (audit->parsed()) {
      cfg.command = "audit";
      return cmd_audit(cfg);
    }
    if (factor->parsed()) {
      cfg.command = "factor";
      return cmd_factor(cfg);
    }
    if (bench->parsed()) {
      cfg.command = "bench";
      return cmd_bench(cfg);
    }
    cfg.command = "examples";
    return cmd_examples(cfg);
  } catch (const AssumptionError& e) {
    std::cerr << "assumption failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
