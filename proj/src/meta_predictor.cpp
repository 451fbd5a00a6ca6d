#include "nocl/meta_predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nocl {

PairAnchorCache::PairAnchorCache(const NoiseKernel& kernel, std::size_t num_features)
    : num_labels_(kernel.num_labels()), feature_invariant_(kernel.feature_invariant()) {
  const std::size_t slots = feature_invariant_ ? 1 : num_features;
  if (!feature_invariant_ && num_features > kernel.feature_slots()) {
    throw std::invalid_argument("kernel does not cover the requested feature range");
  }
  const std::size_t pairs = num_labels_ * (num_labels_ - 1) / 2;
  by_feature_.assign(slots, std::vector<PairAnchor>(pairs));
  bool first = true;
  for (std::size_t x = 0; x < slots; ++x) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < num_labels_; ++a) {
      for (std::size_t b = a + 1; b < num_labels_; ++b, ++idx) {
        GapReport r =
            gap(kernel.set_for(x, a), kernel.set_for(x, b), DivergenceKind::HellingerSq);
        if (!r.converged) {
          throw std::runtime_error("pair separation solve failed while building cache");
        }
        PairAnchor& anchor = by_feature_[x][idx];
        anchor.low = std::move(r.argmin_a);
        anchor.high = std::move(r.argmin_b);
        anchor.gamma = r.value;
        if (first || anchor.gamma < min_gamma_) min_gamma_ = anchor.gamma;
        first = false;
      }
    }
  }
}

const PairAnchor& PairAnchorCache::at(std::size_t feature, std::size_t label_a,
                                      std::size_t label_b) const {
  if (label_a >= label_b) throw std::invalid_argument("anchor lookup wants label_a < label_b");
  const std::size_t slot = feature_invariant_ ? 0 : feature;
  const std::size_t idx =
      label_a * num_labels_ - label_a * (label_a + 1) / 2 + (label_b - label_a - 1);
  return by_feature_.at(slot).at(idx);
}

MetaPredictor::MetaPredictor(std::shared_ptr<const HypothesisClass> hclass,
                             std::shared_ptr<const PairAnchorCache> anchors,
                             Options options)
    : hclass_(std::move(hclass)), anchors_(std::move(anchors)), options_(options) {
  const std::size_t k = hclass_->size();
  if (k < 2) throw std::invalid_argument("elimination needs at least two hypotheses");
  const std::size_t pairs = k * (k - 1) / 2;
  if (options_.tester == PairTesterKind::LeCamBirge) {
    if (!anchors_) throw std::invalid_argument("likelihood-ratio testers need pair anchors");
    lcb_.reserve(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
      lcb_.push_back(LeCamBirgeTester::with_gap_goal(options_.gap_goal));
    }
  } else {
    if (hclass_->num_labels() != 2) {
      throw std::invalid_argument("running-mean testers assume binary labels");
    }
    em_.assign(pairs, EmpiricalMeanTester{});
  }
  cum_surrogate_.assign(k, std::vector<double>(k, 0.0));
  survivors_.resize(k);
  for (std::size_t i = 0; i < k; ++i) survivors_[i] = i;
}

std::size_t MetaPredictor::pair_index(std::size_t i, std::size_t j) const {
  const std::size_t k = hclass_->size();
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t MetaPredictor::tester_label(std::size_t idx, std::size_t label_i,
                                        std::size_t label_j, std::size_t /*i*/,
                                        std::size_t /*j*/) const {
  const int side = options_.tester == PairTesterKind::LeCamBirge ? lcb_[idx].decision()
                                                                 : em_[idx].decision();
  return side == 1 ? label_i : label_j;
}

std::size_t MetaPredictor::predict(std::size_t feature, double u) {
  const std::size_t n = survivors_.size();
  auto pick = static_cast<std::size_t>(u * static_cast<double>(n));
  if (pick >= n) pick = n - 1;
  return hclass_->label(survivors_[pick], feature);
}

void MetaPredictor::observe(std::size_t feature, std::size_t obs) {
  const std::size_t k = hclass_->size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t yi = hclass_->label(i, feature);
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t yj = hclass_->label(j, feature);
      if (yi == yj) continue;  // tester inert on agreement steps
      const std::size_t idx = pair_index(i, j);

      // charge the surrogate with the tester's pre-update prediction
      const std::size_t pred = tester_label(idx, yi, yj, i, j);
      cum_surrogate_[i][j] += surrogate_loss(pred, yi, yj);
      cum_surrogate_[j][i] += surrogate_loss(pred, yj, yi);

      if (options_.tester == PairTesterKind::LeCamBirge) {
        const PairAnchor& anchor = anchors_->at(feature, std::min(yi, yj), std::max(yi, yj));
        const bool straight = yi < yj;
        lcb_[idx].step(straight ? anchor.low : anchor.high,
                       straight ? anchor.high : anchor.low, anchor.gamma, obs);
      } else {
        em_[idx].step(obs == yj ? 1 : 0);
      }
    }
  }

  std::vector<std::size_t> next;
  next.reserve(survivors_.size());
  for (std::size_t s : survivors_) {
    if (row_load(s) <= options_.threshold + 1e-9) next.push_back(s);
  }
  if (next.empty()) {
    emptied_ = true;  // guarantee event failed; keep the old set so play continues
  } else {
    survivors_ = std::move(next);
  }
}

double MetaPredictor::row_load(std::size_t k) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < hclass_->size(); ++j) {
    if (j != k) worst = std::max(worst, cum_surrogate_[k][j]);
  }
  return worst;
}

bool MetaPredictor::guarantee_event_held(std::size_t true_hypothesis) const {
  return row_load(true_hypothesis) <= options_.threshold + 1e-9;
}

}  // namespace nocl
