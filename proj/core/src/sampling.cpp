#include "symfac/sampling.hpp"

#include <cmath>
#include <random>

namespace symfac {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<RVec> sphere_samples(int d, int count) {
  if (d < 1) throw Error("sphere dimension must be >= 1");
  std::vector<RVec> pts;
  if (d == 1) {
    RVec p(1);
    p << 1.0;
    pts.push_back(p);
    p << -1.0;
    pts.push_back(p);
    return pts;
  }
  if (count < 1) return pts;
  pts.reserve(count);
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      double th = 2.0 * kPi * i / count;
      RVec p(2);
      p << std::cos(th), std::sin(th);
      pts.push_back(p);
    }
    return pts;
  }
  if (d == 3) {
    // Fibonacci lattice
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = golden * i;
      RVec p(3);
      p << rho * std::cos(th), rho * std::sin(th), z;
      pts.push_back(p);
    }
    return pts;
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(d) << 32));
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(pts.size()) < count) {
    RVec p(d);
    for (int i = 0; i < d; ++i) p(i) = gauss(rng);
    double nrm = p.norm();
    if (nrm > 1e-12) pts.push_back(p / nrm);
  }
  return pts;
}

std::vector<RVec> sphere_patch(const RVec& center, double radius, int count) {
  int d = static_cast<int>(center.size());
  std::vector<RVec> pts;
  RVec c = center.normalized();
  if (d == 1) {
    pts.push_back(c);
    return pts;
  }
  // Perturb along deterministic tangent directions and renormalize.
  std::vector<RVec> dirs = sphere_samples(d, count);
  pts.reserve(count + 1);
  pts.push_back(c);
  for (const RVec& q : dirs) {
    RVec tang = q - q.dot(c) * c;
    double nrm = tang.norm();
    if (nrm < 1e-12) continue;
    RVec p = (c + radius * tang / nrm).normalized();
    pts.push_back(p);
  }
  return pts;
}

std::vector<RVec> box_samples(const RVec& lo, const RVec& hi, int count, std::uint64_t seed) {
  int n = static_cast<int>(lo.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<RVec> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    RVec p(n);
    for (int i = 0; i < n; ++i) p(i) = lo(i) + (hi(i) - lo(i)) * uni(rng);
    pts.push_back(p);
  }
  return pts;
}

std::vector<std::pair<RVec, RVec>> sphere_pair_samples(int p, int q, int count_each) {
  std::vector<RVec> as = sphere_samples(p, count_each);
  std::vector<RVec> bs = sphere_samples(q, count_each);
  std::vector<std::pair<RVec, RVec>> out;
  out.reserve(as.size() * bs.size());
  // b-major order so consumers can cache work that depends on b only
  for (const RVec& b : bs)
    for (const RVec& a : as) out.emplace_back(a, b);
  return out;
}

}  // namespace symfac
