#include "nocl/hypothesis.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "nocl/random_util.hpp"

namespace nocl {

HypothesisClass HypothesisClass::from_table(std::vector<std::vector<std::size_t>> labels,
                                            std::size_t num_labels) {
  if (labels.empty() || labels.front().empty()) {
    throw std::invalid_argument("hypothesis table must be nonempty");
  }
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  const std::size_t features = labels.front().size();
  for (const auto& row : labels) {
    if (row.size() != features) throw std::invalid_argument("ragged hypothesis table");
    for (std::size_t y : row) {
      if (y >= num_labels) throw std::invalid_argument("label out of range in hypothesis table");
    }
  }
  return HypothesisClass(std::move(labels), num_labels);
}

HypothesisClass HypothesisClass::random(std::size_t k, std::size_t features,
                                        std::size_t num_labels, std::uint64_t seed) {
  if (k == 0 || features == 0) throw std::invalid_argument("empty hypothesis class requested");
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  // capacity check: N^F >= K (log-space to dodge overflow)
  if (static_cast<double>(features) * std::log(static_cast<double>(num_labels)) <
      std::log(static_cast<double>(k)) - 1e-9) {
    throw std::invalid_argument("feature universe too small for K distinct hypotheses");
  }
  Rng rng = make_rng(seed, 101);
  std::uniform_int_distribution<std::size_t> lab(0, num_labels - 1);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> rows;
  std::size_t attempts = 0;
  while (rows.size() < k) {
    if (++attempts > 1000 * k) {
      throw std::runtime_error("failed to sample distinct hypotheses; universe too tight");
    }
    std::vector<std::size_t> row(features);
    for (auto& y : row) y = lab(rng);
    if (seen.insert(row).second) rows.push_back(std::move(row));
  }
  return HypothesisClass(std::move(rows), num_labels);
}

HypothesisClass HypothesisClass::cube(std::size_t tau) {
  if (tau == 0 || tau > 20) throw std::invalid_argument("cube dimension must lie in [1, 20]");
  const std::size_t k = std::size_t{1} << tau;
  std::vector<std::vector<std::size_t>> rows(k, std::vector<std::size_t>(tau, 0));
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t i = 0; i < tau; ++i) rows[b][i] = (b >> i) & 1u;
  }
  return HypothesisClass(std::move(rows), 2);
}

std::size_t max_disagreement_feature(const HypothesisClass& hclass,
                                     std::span<const std::size_t> active,
                                     std::size_t /*step*/) {
  if (active.empty()) throw std::invalid_argument("active hypothesis set is empty");
  std::size_t best_feature = 0;
  std::size_t best_count = 0;
  for (std::size_t x = 0; x < hclass.num_features(); ++x) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        count += hclass.label(active[i], x) != hclass.label(active[j], x);
      }
    }
    if (count > best_count) {  // strict: ties keep the lowest feature
      best_count = count;
      best_feature = x;
    }
  }
  return best_feature;
}

}  // namespace nocl
