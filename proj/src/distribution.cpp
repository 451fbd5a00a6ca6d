#include "nocl/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nocl {

namespace {

constexpr double kClampBelow = 1e-15;
constexpr double kSumSlack = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_arity(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distribution arity mismatch: " +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()));
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("distribution needs at least two symbols");
  }
  double sum = 0.0;
  for (double& v : probs_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("distribution entries must be finite and nonnegative");
    }
    if (v < kClampBelow) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumSlack) {
    throw std::invalid_argument("distribution entries sum to " + std::to_string(sum) +
                                ", outside the 1e-9 tolerance around 1");
  }
  for (double& v : probs_) v /= sum;
}

Distribution Distribution::point_mass(std::size_t index, std::size_t arity) {
  if (index >= arity) throw std::invalid_argument("point_mass index out of range");
  std::vector<double> p(arity, 0.0);
  p[index] = 1.0;
  return Distribution(std::move(p));
}

Distribution Distribution::uniform(std::size_t arity) {
  if (arity < 2) throw std::invalid_argument("uniform needs arity >= 2");
  return Distribution(std::vector<double>(arity, 1.0 / static_cast<double>(arity)));
}

Distribution Distribution::bernoulli(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("bernoulli parameter outside [0,1]");
  return Distribution({1.0 - t, t});
}

Distribution convex_combine(const Distribution& a, const Distribution& b, double t) {
  require_same_arity(a, b);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mixture coefficient outside [0,1]");
  std::vector<double> out(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) out[m] = (1.0 - t) * a[m] + t * b[m];
  return Distribution(std::move(out));
}

double max_abs_diff(const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  double worst = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) worst = std::max(worst, std::abs(p[m] - q[m]));
  return worst;
}

double l2_sq(const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double d = p[m] - q[m];
    acc += d * d;
  }
  return acc;
}

double hellinger_sq(const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double d = std::sqrt(p[m]) - std::sqrt(q[m]);
    acc += d * d;
  }
  // Clip the tiny negative drift that never happens and the > 2 overshoot
  // that can appear at the last ulp for disjoint supports.
  return std::clamp(acc, 0.0, 2.0);
}

double kl(const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] == 0.0) continue;        // 0 * log(0/q) = 0
    if (q[m] == 0.0) return kInf;     // support violation
    acc += p[m] * std::log(p[m] / q[m]);
  }
  return std::max(acc, 0.0);
}

double tv(const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) acc += std::abs(p[m] - q[m]);
  return 0.5 * acc;
}

double renyi(double order, const Distribution& p, const Distribution& q) {
  require_same_arity(p, q);
  if (!(order > 0.0) || order == 1.0) {
    throw std::invalid_argument("renyi order must be positive and != 1");
  }
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] == 0.0) continue;
    if (q[m] == 0.0) {
      if (order > 1.0) return kInf;   // q^(1-order) blows up
      continue;                       // order < 1: the term vanishes
    }
    acc += std::pow(p[m], order) * std::pow(q[m], 1.0 - order);
  }
  if (acc == 0.0) return kInf;        // disjoint supports
  return std::log(acc) / (order - 1.0);
}

double Divergence::operator()(const Distribution& p, const Distribution& q) const {
  switch (kind) {
    case DivergenceKind::L2Sq:
      return l2_sq(p, q);
    case DivergenceKind::KL:
      return kl(p, q);
    case DivergenceKind::HellingerSq:
      return hellinger_sq(p, q);
    case DivergenceKind::TV:
      return tv(p, q);
    case DivergenceKind::Renyi:
      return renyi(order, p, q);
  }
  throw std::logic_error("unknown divergence kind");
}

const char* divergence_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::L2Sq:
      return "l2-sq";
    case DivergenceKind::KL:
      return "kl";
    case DivergenceKind::HellingerSq:
      return "hellinger-sq";
    case DivergenceKind::TV:
      return "tv";
    case DivergenceKind::Renyi:
      return "renyi";
  }
  return "unknown";
}

double loss(const LossSpec& spec, std::size_t obs, const Distribution& p) {
  if (obs >= p.size()) throw std::invalid_argument("loss: observation symbol out of range");
  switch (spec.kind) {
    case LossKind::LogLoss:
      return p[obs] > 0.0 ? -std::log(p[obs]) : kInf;
    case LossKind::BrierLoss: {
      double acc = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) {
        const double d = (m == obs ? 1.0 : 0.0) - p[m];
        acc += d * d;
      }
      return acc;
    }
  }
  throw std::logic_error("unknown loss kind");
}

}  // namespace nocl
