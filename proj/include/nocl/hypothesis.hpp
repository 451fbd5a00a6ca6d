#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nocl {

// Finite class of labeling functions over a finite feature universe,
// stored as a K x F label table.
class HypothesisClass {
 public:
  static HypothesisClass from_table(std::vector<std::vector<std::size_t>> labels,
                                    std::size_t num_labels);
  // Distinct random hypotheses (rejection sampling; throws if the universe
  // cannot hold K distinct functions).
  static HypothesisClass random(std::size_t k, std::size_t features,
                                std::size_t num_labels, std::uint64_t seed);
  // Shattered binary cube: K = 2^tau hypotheses over tau features, with
  // h_b(x_i) = bit i of b.
  static HypothesisClass cube(std::size_t tau);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_features() const { return labels_.front().size(); }
  std::size_t num_labels() const { return num_labels_; }
  std::size_t label(std::size_t hypothesis, std::size_t feature) const {
    return labels_[hypothesis][feature];
  }
  std::span<const std::size_t> row(std::size_t hypothesis) const {
    return labels_[hypothesis];
  }

 private:
  HypothesisClass(std::vector<std::vector<std::size_t>> labels, std::size_t num_labels)
      : labels_(std::move(labels)), num_labels_(num_labels) {}

  std::vector<std::vector<std::size_t>> labels_;
  std::size_t num_labels_;
};

// Feature with the most label-disagreeing hypothesis pairs among the active
// set (indices into the class); ties resolve to the lowest feature index.
// The step parameter keeps call sites explicit about when the choice is
// made; the returned feature depends only on the active set.
std::size_t max_disagreement_feature(const HypothesisClass& hclass,
                                     std::span<const std::size_t> active,
                                     std::size_t step);

}  // namespace nocl
