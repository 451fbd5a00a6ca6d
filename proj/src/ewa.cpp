#include "nocl/ewa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nocl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

EwaState::EwaState(std::size_t num_experts, LossSpec loss_spec)
    : log_weights_(num_experts, 0.0), loss_spec_(loss_spec) {
  if (num_experts == 0) throw std::invalid_argument("aggregator needs at least one expert");
  if (!(loss_spec.alpha > 0.0)) throw std::invalid_argument("aggregator alpha must be positive");
}

Distribution EwaState::predict(std::span<const ExpertFunction> experts,
                               std::size_t feature) const {
  if (experts.size() != log_weights_.size()) {
    throw std::invalid_argument("expert count does not match aggregator state");
  }
  const double shift = *std::max_element(log_weights_.begin(), log_weights_.end());
  if (shift == kNegInf) {
    throw std::runtime_error("all aggregator weights collapsed to zero");
  }
  std::vector<double> mixture(experts.front().at(feature).size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < experts.size(); ++k) {
    if (log_weights_[k] == kNegInf) continue;
    const double w = std::exp(log_weights_[k] - shift);
    total += w;
    const Distribution& f = experts[k].at(feature);
    for (std::size_t m = 0; m < mixture.size(); ++m) mixture[m] += w * f[m];
  }
  for (double& v : mixture) v /= total;
  return Distribution(std::move(mixture));
}

void EwaState::update(std::span<const ExpertFunction> experts, std::size_t feature,
                      std::size_t obs) {
  if (experts.size() != log_weights_.size()) {
    throw std::invalid_argument("expert count does not match aggregator state");
  }
  for (std::size_t k = 0; k < experts.size(); ++k) {
    if (log_weights_[k] == kNegInf) continue;
    const double l = loss(loss_spec_, obs, experts[k].at(feature));
    log_weights_[k] = std::isinf(l) ? kNegInf : log_weights_[k] - loss_spec_.alpha * l;
  }
  ++round_;
}

double ewa_regret_audit(std::span<const ExpertFunction> experts, LossSpec loss_spec,
                        std::span<const std::pair<std::size_t, std::size_t>> stream) {
  EwaState state(experts.size(), loss_spec);
  double mixture_loss = 0.0;
  std::vector<double> expert_loss(experts.size(), 0.0);
  for (const auto& [feature, obs] : stream) {
    mixture_loss += loss(loss_spec, obs, state.predict(experts, feature));
    for (std::size_t k = 0; k < experts.size(); ++k) {
      expert_loss[k] += loss(loss_spec, obs, experts[k].at(feature));
    }
    state.update(experts, feature, obs);
  }
  double best = std::numeric_limits<double>::infinity();
  for (double l : expert_loss) {
    if (std::isfinite(l)) best = std::min(best, l);
  }
  if (!std::isfinite(best)) return 0.0;  // every comparator diverged; vacuous
  return mixture_loss - best;
}

}  // namespace nocl
