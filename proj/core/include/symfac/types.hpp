#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace symfac {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Unrecoverable contract violations (malformed input, solver breakdown).
// Soft diagnostics travel in report structs instead of being thrown.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A verified hypothesis of the method failed on the given data (ellipticity,
// positivity of Z, half-plane separation, ...). The CLI maps this to its own
// exit code so scripted callers can tell bad data from bad math.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// Numerical tolerances, pinned here. Individual entries can be overridden
// by name (CLI --tol NAME=VALUE).
struct Tolerances {
  double sym = 1e-12;       // coefficient symmetry defect
  double indep = 1e-6;      // min sin(angle) for frame admissibility
  double pd = 1e-10;        // positive-definiteness floor
  double blocks = 1e-10;    // frame block reconstruction identity
  double root = 1e-8;       // root agreement between independent routes
  double proj = 1e-8;       // projector algebra residuals
  double cluster = 1e-6;    // relative gap that merges eigenvalue clusters
  double diag = 1e-7;       // diagonalizability reconstruction residual
  double comm = 1e-10;      // relative commutator norm for the fast path
  double rank = 1e-8;       // singular value cutoff for kernel dimensions
  double contour = 1e-11;   // node-doubling stop for contour quadrature
  double quad = 1e-9;       // adaptive panel quadrature relative tolerance
  double m_min = 1e-3;      // floor for the real-part bound m

  // Returns false if the name is unknown.
  bool set(const std::string& name, double value);
};

}  // namespace symfac
