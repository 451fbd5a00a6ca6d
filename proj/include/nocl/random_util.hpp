#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "nocl/distribution.hpp"

namespace nocl {

using Rng = std::mt19937_64;

// Derive a stream-specific generator from a base seed, splitmix-style, so
// sibling streams (runs, suites) never share state.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{seed, stream ^ std::uint64_t{0x9E3779B97F4A7C15}};
  return Rng(seq);
}

// Dirichlet(1) sample: uniform over the simplex interior (up to clamping).
inline Distribution random_distribution(Rng& rng, std::size_t arity) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(arity);
  double sum = 0.0;
  for (double& x : v) {
    x = exp1(rng) + 1e-12;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return Distribution(std::move(v));
}

// As above but with every coordinate at least `floor` (mixes with uniform);
// used where logs of both arguments must stay finite.
inline Distribution random_interior_distribution(Rng& rng, std::size_t arity,
                                                 double floor = 0.05) {
  Distribution d = random_distribution(rng, arity);
  const double t = std::min(1.0, floor * static_cast<double>(arity));
  return convex_combine(d, Distribution::uniform(arity), t);
}

// One draw from a categorical law via inverse CDF on a single uniform.
inline std::size_t sample_index(const Distribution& p, double u) {
  double acc = 0.0;
  for (std::size_t m = 0; m + 1 < p.size(); ++m) {
    acc += p[m];
    if (u < acc) return m;
  }
  return p.size() - 1;
}

inline std::size_t sample_index(const Distribution& p, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return sample_index(p, unif(rng));
}

}  // namespace nocl
