#pragma once

#include <cstddef>

#include "nocl/distribution.hpp"

namespace nocl {

// Exact expected cumulative error of the Bayes-optimal sequential predictor
// distinguishing two observation laws under a uniform prior: at each round it
// plays the a-posteriori more likely hypothesis, so the round-t error mass is
// half the pointwise minimum of the two prefix likelihoods, summed over all
// length-(t-1) observation prefixes.  Exhaustive over the prefix tree, hence
// restricted to tiny instances (arity^horizon <= 256).
double bayes_oracle_risk(const Distribution& q1, const Distribution& q2,
                         std::size_t horizon);

}  // namespace nocl
