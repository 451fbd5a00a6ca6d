#include "nocl/divergence_checks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nocl/random_util.hpp"

namespace nocl {

namespace {

constexpr double kSlack = 1e-12;

// Loss value induced by a Bregman divergence: log loss for KL, Brier for L2.
// Only the difference L(p,q1) - L(p,q2) matters for the three-point check, so
// the entropy-of-p part of each divergence cancels and we can use the plain
// prediction losses.
double expected_loss(const Distribution& p, const Distribution& q, LossKind kind) {
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] == 0.0) continue;
    acc += p[m] * loss(LossSpec{kind, 1.0}, m, q);
  }
  return acc;
}

}  // namespace

ExpConcavityReport check_exp_concavity(LossKind kind, double alpha,
                                       std::size_t trials, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exp-concavity alpha must be positive");
  ExpConcavityReport report;
  report.trials = trials;
  Rng rng = make_rng(seed, 17);
  std::uniform_int_distribution<std::size_t> arity_dist(2, 5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t arity = arity_dist(rng);
    const Distribution p = random_distribution(rng, arity);
    const Distribution q = random_distribution(rng, arity);
    const double lambda = unif(rng);
    const std::size_t obs = std::uniform_int_distribution<std::size_t>(0, arity - 1)(rng);
    const Distribution mixed = convex_combine(p, q, 1.0 - lambda);  // lambda*p + (1-lambda)*q

    const LossSpec spec{kind, alpha};
    const double value = std::exp(-alpha * loss(spec, obs, mixed));
    const double chord = lambda * std::exp(-alpha * loss(spec, obs, p)) +
                         (1.0 - lambda) * std::exp(-alpha * loss(spec, obs, q));
    const double violation = chord - value;
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      std::ostringstream os;
      os << "arity=" << arity << " obs=" << obs << " lambda=" << lambda
         << " excess=" << violation;
      report.witness = os.str();
    }
  }
  report.passed = report.worst_violation <= kSlack;
  return report;
}

BregmanReport bregman_three_point_check(DivergenceKind kind, std::size_t trials,
                                        std::uint64_t seed) {
  if (kind != DivergenceKind::L2Sq && kind != DivergenceKind::KL) {
    throw std::invalid_argument("three-point check supports L2Sq and KL only");
  }
  const LossKind loss_kind =
      kind == DivergenceKind::KL ? LossKind::LogLoss : LossKind::BrierLoss;

  BregmanReport report;
  report.trials = trials;
  Rng rng = make_rng(seed, 29);
  std::uniform_int_distribution<std::size_t> arity_dist(2, 5);
  std::uniform_int_distribution<std::size_t> atoms_dist(2, 5);

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t arity = arity_dist(rng);
    const std::size_t atoms = atoms_dist(rng);

    // Random finite mixture P over `atoms` distributions.
    std::vector<Distribution> points;
    points.reserve(atoms);
    for (std::size_t a = 0; a < atoms; ++a) {
      points.push_back(kind == DivergenceKind::KL
                           ? random_interior_distribution(rng, arity)
                           : random_distribution(rng, arity));
    }
    const Distribution weights = random_distribution(rng, atoms);

    const Distribution q1 = random_interior_distribution(rng, arity);
    const Distribution q2 = random_interior_distribution(rng, arity);

    // E_P[p] via the mixture weights.
    std::vector<double> mean(arity, 0.0);
    for (std::size_t a = 0; a < atoms; ++a) {
      for (std::size_t m = 0; m < arity; ++m) mean[m] += weights[a] * points[a][m];
    }
    const Distribution pbar{std::move(mean)};

    double lhs = 0.0;
    for (std::size_t a = 0; a < atoms; ++a) {
      lhs += weights[a] *
             (expected_loss(points[a], q1, loss_kind) - expected_loss(points[a], q2, loss_kind));
    }
    const double rhs =
        expected_loss(pbar, q1, loss_kind) - expected_loss(pbar, q2, loss_kind);
    report.worst_gap = std::max(report.worst_gap, std::abs(lhs - rhs));
  }
  report.passed = report.worst_gap <= 1e-10;
  return report;
}

}  // namespace nocl
