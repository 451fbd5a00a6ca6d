#include "nocl/noise_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nocl {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Law that agrees with label y with probability (1 + lambda) / 2 (binary).
Distribution margin_law(std::size_t y, double lambda) {
  const double agree = 0.5 * (1.0 + lambda);
  return y == 1 ? Distribution::bernoulli(agree) : Distribution::bernoulli(1.0 - agree);
}

}  // namespace

NoiseKernel NoiseKernel::massart(double eta) {
  if (!(eta >= 0.0 && eta < 0.5)) {
    throw std::invalid_argument("massart flip rate must lie in [0, 1/2)");
  }
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::MassartBernoulli;
  k.arity_ = 2;
  k.num_labels_ = 2;
  k.eta_ = eta;
  k.name_ = "massart(eta=" + fmt(eta) + ")";
  return k;
}

NoiseKernel NoiseKernel::randomized_response(double eta, std::size_t arity) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw std::invalid_argument("randomized-response eta must lie in [0, 1)");
  }
  if (arity < 2) throw std::invalid_argument("randomized response needs arity >= 2");
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::RandomizedResponse;
  k.arity_ = arity;
  k.num_labels_ = arity;
  k.eta_ = eta;
  k.name_ = "rr(eta=" + fmt(eta) + ";m=" + std::to_string(arity) + ")";
  return k;
}

NoiseKernel NoiseKernel::tsybakov(std::vector<double> lambdas, double amplitude, double alpha) {
  if (lambdas.empty()) throw std::invalid_argument("tsybakov needs a margin sequence");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("tsybakov alpha must lie in (0,1)");
  if (!(amplitude > 0.0)) throw std::invalid_argument("tsybakov amplitude must be positive");
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] >= 0.0 && lambdas[j] <= 1.0)) {
      throw std::invalid_argument("tsybakov margins must lie in [0, 1]");
    }
    if (j > 0 && lambdas[j] < lambdas[j - 1] - 1e-12) {
      throw std::invalid_argument("tsybakov margins must be nondecreasing");
    }
  }
  // Margin-density condition: the mass of small margins is polynomially
  // controlled.  Checked at each distinct margin value.
  const double horizon = static_cast<double>(lambdas.size());
  const double expo = alpha / (1.0 - alpha);
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double r = lambdas[j];
    if (r <= 0.0) continue;
    const auto count = static_cast<double>(
        std::upper_bound(lambdas.begin(), lambdas.end(), r + 1e-12) - lambdas.begin());
    if (count > amplitude * horizon * std::pow(r, expo) * (1.0 + 1e-9) + 1e-6) {
      throw std::invalid_argument("tsybakov margin sequence violates the density condition");
    }
  }
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::Tsybakov;
  k.arity_ = 2;
  k.num_labels_ = 2;
  k.feature_slots_ = lambdas.size();
  k.feature_invariant_ = false;
  k.amplitude_ = amplitude;
  k.alpha_ = alpha;
  k.name_ = "tsybakov(alpha=" + fmt(alpha) + ";A=" + fmt(amplitude) +
            ";T=" + std::to_string(lambdas.size()) + ")";
  k.lambdas_ = std::move(lambdas);
  return k;
}

NoiseKernel NoiseKernel::tsybakov_worst_case(double amplitude, double alpha,
                                             std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("tsybakov horizon must be positive");
  if (!(amplitude >= 1.0)) {
    // smaller amplitudes force capped margins that break the density condition
    throw std::invalid_argument("worst-case tsybakov generator needs amplitude >= 1");
  }
  std::vector<double> lambdas(horizon);
  const double expo = (1.0 - alpha) / alpha;
  for (std::size_t j = 1; j <= horizon; ++j) {
    lambdas[j - 1] = std::min(
        1.0, std::pow(static_cast<double>(j) / (amplitude * static_cast<double>(horizon)), expo));
  }
  return tsybakov(std::move(lambdas), amplitude, alpha);
}

NoiseKernel NoiseKernel::tv_ball(std::vector<Distribution> canonical, double eps) {
  if (canonical.size() < 2) throw std::invalid_argument("tv ball needs >= 2 labels");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("tv radius must lie in [0, 1]");
  const std::size_t arity = canonical.front().size();
  for (const auto& c : canonical) {
    if (c.size() != arity) throw std::invalid_argument("tv ball laws must share one alphabet");
  }
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::TVBall;
  k.arity_ = arity;
  k.num_labels_ = canonical.size();
  k.eps_ = eps;
  k.name_ = "tv-ball(eps=" + fmt(eps) + ")";
  k.canonical_ = std::move(canonical);
  return k;
}

NoiseKernel NoiseKernel::singleton_table(std::vector<std::vector<Distribution>> table) {
  if (table.empty() || table.front().size() < 2) {
    throw std::invalid_argument("singleton table needs >= 1 feature and >= 2 labels");
  }
  const std::size_t labels = table.front().size();
  const std::size_t arity = table.front().front().size();
  for (const auto& row : table) {
    if (row.size() != labels) throw std::invalid_argument("ragged singleton table");
    for (const auto& d : row) {
      if (d.size() != arity) throw std::invalid_argument("singleton table alphabet mismatch");
    }
  }
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::Singleton;
  k.arity_ = arity;
  k.num_labels_ = labels;
  k.feature_slots_ = table.size();
  k.feature_invariant_ = table.size() == 1;
  k.name_ = "singleton(features=" + std::to_string(table.size()) + ")";
  k.table_.reserve(table.size());
  for (auto& row : table) {
    std::vector<KernelSet> sets;
    sets.reserve(row.size());
    for (auto& d : row) sets.push_back(KernelSet::singleton(std::move(d)));
    k.table_.push_back(std::move(sets));
  }
  return k;
}

NoiseKernel NoiseKernel::custom_table(std::vector<std::vector<KernelSet>> table) {
  if (table.empty() || table.front().size() < 2) {
    throw std::invalid_argument("custom table needs >= 1 feature and >= 2 labels");
  }
  const std::size_t labels = table.front().size();
  const std::size_t arity = table.front().front().arity();
  for (const auto& row : table) {
    if (row.size() != labels) throw std::invalid_argument("ragged custom table");
    for (const auto& s : row) {
      if (s.arity() != arity) throw std::invalid_argument("custom table alphabet mismatch");
    }
  }
  NoiseKernel k;
  k.kind_ = NoiseKernelKind::Custom;
  k.arity_ = arity;
  k.num_labels_ = labels;
  k.feature_slots_ = table.size();
  k.feature_invariant_ = table.size() == 1;
  k.name_ = "custom(features=" + std::to_string(table.size()) + ")";
  k.table_ = std::move(table);
  return k;
}

KernelSet NoiseKernel::set_for(std::size_t feature, std::size_t label) const {
  if (label >= num_labels_) throw std::invalid_argument("label out of range");
  if (!feature_invariant_ && feature >= feature_slots_) {
    throw std::invalid_argument("feature slot out of range for this kernel");
  }
  switch (kind_) {
    case NoiseKernelKind::MassartBernoulli: {
      if (eta_ == 0.0) {
        return KernelSet::singleton(Distribution::bernoulli(label == 1 ? 1.0 : 0.0));
      }
      return label == 0
                 ? KernelSet::segment(Distribution::bernoulli(0.0), Distribution::bernoulli(eta_))
                 : KernelSet::segment(Distribution::bernoulli(1.0 - eta_),
                                      Distribution::bernoulli(1.0));
    }
    case NoiseKernelKind::RandomizedResponse: {
      const Distribution clean = Distribution::point_mass(label, arity_);
      if (eta_ == 0.0) return KernelSet::singleton(clean);
      const Distribution noisy =
          convex_combine(clean, Distribution::uniform(arity_), eta_);
      return KernelSet::segment(clean, noisy);
    }
    case NoiseKernelKind::Tsybakov: {
      const double lo = lambdas_[feature];
      if (lo >= 1.0 - 1e-15) return KernelSet::singleton(margin_law(label, 1.0));
      return KernelSet::segment(margin_law(label, lo), margin_law(label, 1.0));
    }
    case NoiseKernelKind::TVBall: {
      const Distribution& c = canonical_[label];
      if (eps_ == 0.0) return KernelSet::singleton(c);
      std::vector<Distribution> verts{c};
      for (std::size_t to = 0; to < arity_; ++to) {
        for (std::size_t from = 0; from < arity_; ++from) {
          if (to == from) continue;
          const double move = std::min(eps_, c[from]);
          if (move <= 0.0) continue;
          std::vector<double> v(c.probs().begin(), c.probs().end());
          v[to] += move;
          v[from] -= move;
          Distribution cand{std::move(v)};
          if (std::none_of(verts.begin(), verts.end(), [&](const Distribution& w) {
                return max_abs_diff(w, cand) < 1e-12;
              })) {
            verts.push_back(std::move(cand));
          }
        }
      }
      if (verts.size() == 1) return KernelSet::singleton(verts[0]);
      if (verts.size() == 2) return KernelSet::segment(verts[0], verts[1]);
      return KernelSet::polytope(std::move(verts));
    }
    case NoiseKernelKind::Singleton:
    case NoiseKernelKind::Custom:
      return table_[feature_invariant_ ? 0 : feature][label];
  }
  throw std::logic_error("unknown kernel kind");
}

double NoiseKernel::eta() const {
  if (kind_ != NoiseKernelKind::MassartBernoulli &&
      kind_ != NoiseKernelKind::RandomizedResponse) {
    throw std::logic_error("eta is only defined for massart / randomized response");
  }
  return eta_;
}

double NoiseKernel::tsybakov_amplitude() const {
  if (kind_ != NoiseKernelKind::Tsybakov) throw std::logic_error("not a tsybakov kernel");
  return amplitude_;
}

double NoiseKernel::tsybakov_alpha() const {
  if (kind_ != NoiseKernelKind::Tsybakov) throw std::logic_error("not a tsybakov kernel");
  return alpha_;
}

const std::vector<double>& NoiseKernel::tsybakov_lambdas() const {
  if (kind_ != NoiseKernelKind::Tsybakov) throw std::logic_error("not a tsybakov kernel");
  return lambdas_;
}

MinGapReport min_pairwise_gap(const NoiseKernel& kernel,
                              std::span<const std::size_t> features, DivergenceKind d) {
  if (features.empty()) throw std::invalid_argument("min_pairwise_gap needs features");
  MinGapReport best;
  bool first = true;
  for (std::size_t x : features) {
    for (std::size_t a = 0; a < kernel.num_labels(); ++a) {
      for (std::size_t b = a + 1; b < kernel.num_labels(); ++b) {
        GapReport r = gap(kernel.set_for(x, a), kernel.set_for(x, b), d);
        if (first || r.value < best.report.value - 1e-15) {
          best = MinGapReport{std::move(r), x, a, b};
          first = false;
        }
      }
    }
  }
  return best;
}

}  // namespace nocl
