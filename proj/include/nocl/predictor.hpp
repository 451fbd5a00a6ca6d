#pragma once

#include <cstddef>

#include "nocl/distribution.hpp"

namespace nocl {

// Online label predictor driven by the game loop.  Each round the loop calls
// predict(feature, u) first and observe(feature, obs) afterwards; u is the
// round's pre-drawn uniform in [0,1) so that randomized rules consume
// exactly one draw and deterministic rules can ignore it without perturbing
// the stream.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::size_t predict(std::size_t feature, double u) = 0;
  virtual void observe(std::size_t feature, std::size_t obs) = 0;

  // Post-run audit: whether the rule's high-probability guarantee event held
  // on this run given the realized truth.  Rules without such an event
  // report true.
  virtual bool guarantee_event_held(std::size_t /*true_hypothesis*/) const { return true; }

  // Law estimate backing the latest predict() call, when the rule keeps one.
  virtual const Distribution* last_estimate() const { return nullptr; }
};

}  // namespace nocl
