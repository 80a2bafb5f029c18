#pragma once

#include <vector>

#include "symfac/bench.hpp"
#include "symfac/grid.hpp"
#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Scaled cube partition of unity on the slab grid: the base cutoff is 1 on
// |t| <= 1 and 0 on |t| >= 3/2, tensorized over (t, x), translated to the
// lattice g/mu and normalized by the lattice sum. Constants c1, c2, c3 are
// measured suprema of |D^k .| / mu^k for k = 0, 1, 2.

double base_cutoff(double t);
double base_cutoff_d1(double t);
double base_cutoff_d2(double t);

struct PartitionMember {
  int g1 = 0, g2 = 0;                  // lattice index (t axis, x axis)
  double t_center = 0, x_center = 0;   // cube center g / mu
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;  // inclusive grid window of the support
  RMat eta;                            // normalized member values on the window
};

struct PartitionFamily {
  double mu = 1;
  int nt = 0, nx = 0;
  std::vector<PartitionMember> members;
  RMat theta_bar;             // lattice sum of raw cutoffs, >= 1 everywhere
  double c1 = 0;              // raw member derivative constant
  double c2 = 0;              // lattice sum derivative constant
  double c3 = 0;              // normalized member derivative constant
  double sum_defect = 0;      // max |sum_g eta_g - 1| over the grid
  double theta_bar_min = 0;
  int max_active = 0;         // largest number of members alive at one point
  int support_neighbors = 0;  // largest open-support overlap count per member
};

// Builds the family on the grid. The grid must resolve the scale 1/mu with
// at least 8 cells on both axes.
PartitionFamily eta_family(double mu, const Grid& g);

// Frozen-vs-variable second-order coefficient probe on one family scale.
// For each active cube the three error components measure, in the grid L2
// norm, how far the variable operator drifts from its value frozen at the
// cube center and how much the cutoff commutator contributes.
struct CubeError {
  int g1 = 0, g2 = 0;
  double e_frozen = 0;   // ||(L - L_g)(eta v)||
  double e_comm = 0;     // ||eta L v - L(eta v)||
  double e_total = 0;    // ||eta L v - L_g(eta v)||
  double majorant = 0;   // mu^{-1}||D^2 v|| + mu||D v|| + mu^2||v|| on the doubled cube
};

struct FrozenProbeReport {
  double mu = 1;
  double k_induced = 0;  // k = 2 c2 mu^2, the scale coupling used downstream
  std::vector<CubeError> cubes;
  double max_ratio = 0;         // max e_total / majorant
  double max_frozen_ratio = 0;  // max e_frozen / majorant
  double max_comm_ratio = 0;    // max e_comm / majorant
};

FrozenProbeReport frozen_error_probe(const SystemSpec& spec, const TestField& v, double mu,
                                     const Grid& g, const Tolerances& tol = {});

}  // namespace symfac
