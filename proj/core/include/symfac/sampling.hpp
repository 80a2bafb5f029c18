#pragma once

#include <cstdint>
#include <vector>

#include "symfac/types.hpp"

namespace symfac {

// Deterministic, roughly equidistributed points on the unit sphere of R^d.
// d=1 gives {+1,-1}; d=2 equally spaced angles; d=3 a Fibonacci lattice;
// higher d falls back to seeded normalized Gaussians (still deterministic).
std::vector<RVec> sphere_samples(int d, int count);

// Points on the sphere near `center` within angular radius `radius`,
// used for local refinement sweeps.
std::vector<RVec> sphere_patch(const RVec& center, double radius, int count);

// Uniform points in the box [lo, hi], seeded.
std::vector<RVec> box_samples(const RVec& lo, const RVec& hi, int count, std::uint64_t seed);

// Pairs of unit vectors (a in R^p, b in R^q) covering the product of
// spheres, for ellipticity scans.
std::vector<std::pair<RVec, RVec>> sphere_pair_samples(int p, int q, int count_each);

}  // namespace symfac
