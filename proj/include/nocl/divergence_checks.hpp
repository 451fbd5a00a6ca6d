#pragma once

#include <cstdint>
#include <string>

#include "nocl/distribution.hpp"

namespace nocl {

// Randomized audit of e^{-alpha * loss} concavity in the prediction argument.
// Draws (p, q, lambda, obs) tuples over alphabets of size 2..5 and checks the
// mixture value against the chord.  worst_violation is the largest observed
// chord - value excess (0 when the property held everywhere); pass threshold
// is 1e-12 of slack.
struct ExpConcavityReport {
  bool passed = true;
  double worst_violation = 0.0;
  std::size_t trials = 0;
  std::string witness;  // human-readable triple for the worst violation
};

ExpConcavityReport check_exp_concavity(LossKind kind, double alpha,
                                       std::size_t trials, std::uint64_t seed);

// Randomized audit of the three-point identity
//   E_P[ L(p, q1) - L(p, q2) ] = L(pbar, q1) - L(pbar, q2),  pbar = E_P[p],
// for losses whose divergence is Bregman (squared L2 and KL).  Mixtures use
// up to five atoms; for KL the sampled points are kept away from the simplex
// boundary so both sides stay finite.
struct BregmanReport {
  bool passed = true;
  double worst_gap = 0.0;
  std::size_t trials = 0;
};

BregmanReport bregman_three_point_check(DivergenceKind kind, std::size_t trials,
                                        std::uint64_t seed);

}  // namespace nocl
