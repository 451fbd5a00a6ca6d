#pragma once

#include <memory>
#include <vector>

#include "nocl/hypothesis.hpp"
#include "nocl/noise_kernel.hpp"
#include "nocl/pair_tester.hpp"
#include "nocl/predictor.hpp"

namespace nocl {

enum class PairTesterKind { LeCamBirge, EmpiricalMean };

// Closest pair between two label sets under squared Hellinger distance,
// cached per (feature, unordered label pair) so every run and thread can
// share one read-only copy.
struct PairAnchor {
  Distribution low = Distribution::uniform(2);   // witness on the lower label's side
  Distribution high = Distribution::uniform(2);  // witness on the higher label's side
  double gamma = 0.0;                            // their separation
};

class PairAnchorCache {
 public:
  PairAnchorCache(const NoiseKernel& kernel, std::size_t num_features);

  // Requires label_a < label_b.
  const PairAnchor& at(std::size_t feature, std::size_t label_a, std::size_t label_b) const;
  double min_gamma() const { return min_gamma_; }

 private:
  std::vector<std::vector<PairAnchor>> by_feature_;  // [slot][pair index]
  std::size_t num_labels_;
  bool feature_invariant_;
  double min_gamma_ = 0.0;
};

// Elimination-style meta predictor: one sequential tester per hypothesis
// pair, a cumulative surrogate-loss matrix, and a survivor set pruned when a
// row's worst pairwise surrogate load exceeds the threshold.  Predictions
// sample a survivor uniformly (via the round's uniform draw) and play its
// label.  Per-pair testers run on the steps where the two hypotheses
// disagree and stay inert elsewhere.
class MetaPredictor : public Predictor {
 public:
  struct Options {
    PairTesterKind tester = PairTesterKind::LeCamBirge;
    double threshold = 0.0;       // surrogate-load elimination threshold C
    double gap_goal = 0.0;        // per-tester accumulated-separation budget (LCB)
  };

  MetaPredictor(std::shared_ptr<const HypothesisClass> hclass,
                std::shared_ptr<const PairAnchorCache> anchors,  // LCB only
                Options options);

  std::size_t predict(std::size_t feature, double u) override;
  void observe(std::size_t feature, std::size_t obs) override;

  const std::vector<std::size_t>& survivors() const { return survivors_; }
  bool survivors_ever_emptied() const { return emptied_; }
  double threshold() const { return options_.threshold; }
  // l^k: worst cumulative pairwise surrogate load of hypothesis k so far.
  double row_load(std::size_t k) const;
  // The realizable guarantee: the true hypothesis' surrogate load never
  // exceeded the threshold (audited with the truth supplied post-run).
  bool guarantee_event_held(std::size_t true_hypothesis) const override;

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const;  // i < j
  std::size_t tester_label(std::size_t idx, std::size_t label_i, std::size_t label_j,
                           std::size_t i, std::size_t j) const;

  std::shared_ptr<const HypothesisClass> hclass_;
  std::shared_ptr<const PairAnchorCache> anchors_;
  Options options_;
  std::vector<LeCamBirgeTester> lcb_;
  std::vector<EmpiricalMeanTester> em_;
  std::vector<std::vector<double>> cum_surrogate_;  // K x K, diagonal unused
  std::vector<std::size_t> survivors_;
  bool emptied_ = false;
};

}  // namespace nocl
