#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nocl {

// Probability vector over M >= 2 observation symbols.
//
// Construction sanitizes the raw entries: anything below 1e-15 is clamped to
// zero (guards downstream log/sqrt calls), and a total within 1e-9 of one is
// renormalized so the invariant sum == 1 holds to ~1e-12 afterwards.  Inputs
// further off than 1e-9, negative entries, or fewer than two symbols are
// rejected with std::invalid_argument.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution point_mass(std::size_t index, std::size_t arity);
  static Distribution uniform(std::size_t arity);
  // Two-symbol law {1 - t, t}; index 1 carries probability t.
  static Distribution bernoulli(double t);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t m) const { return probs_[m]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

// Pointwise convex combination (1 - t) * a + t * b, t in [0, 1].
Distribution convex_combine(const Distribution& a, const Distribution& b, double t);

// Largest |p[m] - q[m]| over the shared alphabet; handy for test tolerances.
double max_abs_diff(const Distribution& p, const Distribution& q);

// --- divergences ------------------------------------------------------------
//
// All take same-arity arguments (mismatch throws).  kl and renyi return
// +infinity when the support condition fails instead of raising.

// Squared Euclidean distance ||p - q||_2^2, range [0, 2].
double l2_sq(const Distribution& p, const Distribution& q);

// Squared Hellinger distance sum_m (sqrt(p_m) - sqrt(q_m))^2, range [0, 2].
double hellinger_sq(const Distribution& p, const Distribution& q);

// Kullback-Leibler divergence; +inf if p puts mass where q has none.
double kl(const Distribution& p, const Distribution& q);

// Total variation distance, i.e. half the L1 distance, range [0, 1].
double tv(const Distribution& p, const Distribution& q);

// Renyi divergence of the given order (order > 0, order != 1).
double renyi(double order, const Distribution& p, const Distribution& q);

enum class DivergenceKind { L2Sq, KL, HellingerSq, TV, Renyi };

// Tagged divergence selector so call sites can carry "which divergence plus
// its order" as one value.  order is only meaningful for Renyi.
struct Divergence {
  DivergenceKind kind = DivergenceKind::L2Sq;
  double order = 0.5;

  double operator()(const Distribution& p, const Distribution& q) const;
};

const char* divergence_name(DivergenceKind kind);

// --- prediction losses -------------------------------------------------------

enum class LossKind { LogLoss, BrierLoss };

// Loss with its exp-concavity constant.  The named constructors pair each
// loss with the largest alpha the mixability argument supports (1 for log
// loss, 1/4 for Brier); check_exp_concavity accepts arbitrary (kind, alpha)
// pairs so the failure mode stays demonstrable.
struct LossSpec {
  LossKind kind = LossKind::LogLoss;
  double alpha = 1.0;

  static LossSpec log_loss() { return {LossKind::LogLoss, 1.0}; }
  static LossSpec brier() { return {LossKind::BrierLoss, 0.25}; }
};

// loss(spec, obs, p): log loss -log p[obs] (+inf at zero mass) or Brier
// ||e_obs - p||_2^2.
double loss(const LossSpec& spec, std::size_t obs, const Distribution& p);

}  // namespace nocl
