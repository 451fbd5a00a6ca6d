#include "nocl/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nocl {

namespace {

// epsilon with hellinger_sq(Bern(1/2 - eps), Bern(1/2 + eps)) == gamma.
double bias_for_separation(double gamma) {
  if (!(gamma > 0.0 && gamma <= 2.0)) {
    throw std::invalid_argument("separation must lie in (0, 2]");
  }
  const double root = (2.0 - gamma) / 4.0;  // sqrt(1/4 - eps^2)
  return std::sqrt(std::max(0.0, 0.25 - root * root));
}

HypothesisClass two_hypothesis_class(std::size_t horizon) {
  std::vector<std::vector<std::size_t>> rows(2, std::vector<std::size_t>(horizon, 0));
  std::fill(rows[1].begin(), rows[1].end(), 1);
  return HypothesisClass::from_table(std::move(rows), 2);
}

std::vector<std::size_t> iota_features(std::size_t horizon) {
  std::vector<std::size_t> f(horizon);
  for (std::size_t t = 0; t < horizon; ++t) f[t] = t;
  return f;
}

}  // namespace

LowerBoundInstance build_lower_bound_instance(std::size_t tau, double gamma_h,
                                              std::size_t horizon) {
  if (tau == 0) throw std::invalid_argument("cube dimension must be positive");
  if (horizon < tau) throw std::invalid_argument("horizon must cover one round per feature");
  const double eps = bias_for_separation(gamma_h);

  std::vector<std::vector<Distribution>> table;
  table.reserve(tau);
  for (std::size_t x = 0; x < tau; ++x) {
    table.push_back({Distribution::bernoulli(0.5 - eps), Distribution::bernoulli(0.5 + eps)});
  }

  LowerBoundInstance inst{HypothesisClass::cube(tau),
                          NoiseKernel::singleton_table(std::move(table)),
                          AdversaryStrategy{},
                          eps,
                          gamma_h};
  std::vector<std::size_t> epoch_features(tau);
  for (std::size_t i = 0; i < tau; ++i) epoch_features[i] = i;
  inst.adversary.features = FeatureRule::epochs(std::move(epoch_features), horizon / tau);
  inst.adversary.noise = NoiseRule::worst();
  inst.adversary.ground_truth = kUniformTruth;
  return inst;
}

TwoHypothesisInstance build_soft_gap_instance(double alpha, double amplitude,
                                              std::size_t horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(amplitude >= 1.0)) throw std::invalid_argument("amplitude must be >= 1");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");

  const double expo = (1.0 - alpha) / alpha;
  std::vector<double> gammas(horizon);
  std::vector<std::vector<Distribution>> table;
  table.reserve(horizon);
  for (std::size_t j = 1; j <= horizon; ++j) {
    const double g = std::min(
        1.0, std::pow(static_cast<double>(j) / (amplitude * static_cast<double>(horizon)), expo));
    gammas[j - 1] = g;
    const double eps = bias_for_separation(g);
    table.push_back({Distribution::bernoulli(0.5 - eps), Distribution::bernoulli(0.5 + eps)});
  }

  TwoHypothesisInstance inst{two_hypothesis_class(horizon),
                             NoiseKernel::singleton_table(std::move(table)),
                             AdversaryStrategy{}, std::move(gammas)};
  inst.adversary.features = FeatureRule::fixed(iota_features(horizon));
  inst.adversary.noise = NoiseRule::worst();
  inst.adversary.ground_truth = 1;
  return inst;
}

TwoHypothesisInstance build_tsybakov_instance(double alpha, double amplitude,
                                              std::size_t horizon) {
  NoiseKernel kernel = NoiseKernel::tsybakov_worst_case(amplitude, alpha, horizon);
  std::vector<double> gammas;
  gammas.reserve(horizon);
  for (double lambda : kernel.tsybakov_lambdas()) {
    // closest pair across the two margin segments sits at the small-margin
    // ends: H^2 = 2 - 2 sqrt(1 - lambda^2)
    gammas.push_back(2.0 - 2.0 * std::sqrt(std::max(0.0, 1.0 - lambda * lambda)));
  }

  TwoHypothesisInstance inst{two_hypothesis_class(horizon), std::move(kernel),
                             AdversaryStrategy{}, std::move(gammas)};
  inst.adversary.features = FeatureRule::fixed(iota_features(horizon));
  inst.adversary.noise = NoiseRule::worst();
  inst.adversary.ground_truth = 1;
  return inst;
}

std::size_t empirical_mean_error_budget(std::span<const double> lambdas, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double horizon = static_cast<double>(lambdas.size());
  double mass = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < lambdas.size(); ++t) {
    const double envelope =
        std::sqrt(2.0 * static_cast<double>(t + 1) * std::log(horizon / delta));
    if (mass <= envelope) ++count;
    mass += lambdas[t];
  }
  return count;
}

}  // namespace nocl
