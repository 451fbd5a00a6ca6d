#include "nocl/bayes_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nocl {

namespace {

double node_risk(const Distribution& q1, const Distribution& q2, std::size_t remaining,
                 double like1, double like2) {
  if (remaining == 0) return 0.0;
  // Predicting at this prefix: the Bayes rule errs with the smaller of the
  // two (uniform-prior) joint masses.
  double acc = 0.5 * std::min(like1, like2);
  for (std::size_t m = 0; m < q1.size(); ++m) {
    const double c1 = like1 * q1[m];
    const double c2 = like2 * q2[m];
    if (c1 == 0.0 && c2 == 0.0) continue;  // unreachable branch of the tree
    acc += node_risk(q1, q2, remaining - 1, c1, c2);
  }
  return acc;
}

}  // namespace

double bayes_oracle_risk(const Distribution& q1, const Distribution& q2,
                         std::size_t horizon) {
  if (q1.size() != q2.size()) throw std::invalid_argument("oracle laws must share one alphabet");
  if (horizon == 0) return 0.0;
  const double nodes =
      static_cast<double>(horizon) * std::log(static_cast<double>(q1.size()));
  if (nodes > std::log(256.0) + 1e-9) {
    throw std::invalid_argument("oracle instance too large (arity^horizon must be <= 256)");
  }
  return node_risk(q1, q2, horizon, 1.0, 1.0);
}

}  // namespace nocl
