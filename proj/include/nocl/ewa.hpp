#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nocl/distribution.hpp"

namespace nocl {

// One expert: a map from feature to predicted observation law.
struct ExpertFunction {
  std::size_t id = 0;
  std::vector<Distribution> dist_for;  // indexed by feature

  const Distribution& at(std::size_t feature) const { return dist_for[feature]; }
};

// Exponentially weighted mixture over a fixed expert list.  Weights live in
// log domain so repeated +inf losses only drive entries to -inf instead of
// denormalizing the whole state; prediction shifts by the max before
// exponentiating.
class EwaState {
 public:
  EwaState(std::size_t num_experts, LossSpec loss_spec);

  // Weighted mixture of the experts' predicted laws at this feature.
  Distribution predict(std::span<const ExpertFunction> experts, std::size_t feature) const;

  // Multiplicative update: log w_k -= alpha * loss(obs, f_k(feature)).
  void update(std::span<const ExpertFunction> experts, std::size_t feature, std::size_t obs);

  std::span<const double> log_weights() const { return log_weights_; }
  const LossSpec& loss_spec() const { return loss_spec_; }
  std::size_t round() const { return round_; }

 private:
  std::vector<double> log_weights_;
  LossSpec loss_spec_;
  std::size_t round_ = 0;
};

// Replays the aggregator over a (feature, observation) stream and returns the
// worst pointwise regret: cumulative mixture loss minus the best single
// expert's cumulative loss.  Experts whose cumulative loss is infinite are
// skipped as comparators.
double ewa_regret_audit(std::span<const ExpertFunction> experts, LossSpec loss_spec,
                        std::span<const std::pair<std::size_t, std::size_t>> stream);

}  // namespace nocl
