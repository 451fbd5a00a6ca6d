#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nocl/ewa.hpp"
#include "nocl/hypothesis.hpp"
#include "nocl/noise_kernel.hpp"
#include "nocl/predictor.hpp"

namespace nocl {

// --- pure decision rules -------------------------------------------------------

// Most likely observation symbol; ties resolve to the lowest index.
std::size_t argmax_index(const Distribution& p);

// Label whose anchor law is closest to the estimate; ties -> lowest label.
// d must be L2Sq or HellingerSq.
std::size_t nearest_anchor_label(const Distribution& estimate,
                                 std::span<const Distribution> anchors,
                                 DivergenceKind d);

// --- shared per-experiment tables ------------------------------------------------

// anchors[x][y] is the representative law used for label y at feature x, and
// experts[k] maps features to the anchor of h_k's label there.  Immutable
// after construction, so runs can share one instance across threads.
struct PredictionTables {
  std::vector<std::vector<Distribution>> anchors;
  std::vector<ExpertFunction> experts;
};

// Anchors from the closest-pair witnesses between the two label sets under
// squared L2; binary labels only.  Throws when a pair solve fails.
PredictionTables build_reduction_tables(const NoiseKernel& kernel,
                                        const HypothesisClass& hclass);

// Anchors from each label's canonical representative: the singleton element,
// or the fully-noised endpoint for randomized response.  Other kernel kinds
// have no canonical single law and are rejected.
PredictionTables build_representative_tables(const NoiseKernel& kernel,
                                             const HypothesisClass& hclass);

// --- predictors -------------------------------------------------------------------

// Brier-weighted aggregation over the class, decision via the closest label
// anchor in squared L2.  Binary labels.
class L2ReductionPredictor : public Predictor {
 public:
  L2ReductionPredictor(std::shared_ptr<const PredictionTables> tables, LossSpec spec);

  std::size_t predict(std::size_t feature, double u) override;
  void observe(std::size_t feature, std::size_t obs) override;
  const Distribution* last_estimate() const override;
  const EwaState& state() const { return state_; }

 private:
  std::shared_ptr<const PredictionTables> tables_;
  EwaState state_;
  std::optional<Distribution> last_estimate_;
};

// Log-loss aggregation, decision by the mode of the estimated law; needs the
// label and observation alphabets to coincide.
class ArgmaxPredictor : public Predictor {
 public:
  explicit ArgmaxPredictor(std::shared_ptr<const PredictionTables> tables);

  std::size_t predict(std::size_t feature, double u) override;
  void observe(std::size_t feature, std::size_t obs) override;
  const Distribution* last_estimate() const override;

 private:
  std::shared_ptr<const PredictionTables> tables_;
  EwaState state_;
  std::optional<Distribution> last_estimate_;
};

// Log-loss aggregation, decision via the closest anchor in squared Hellinger
// distance; intended for singleton kernels.
class HellingerNearestPredictor : public Predictor {
 public:
  explicit HellingerNearestPredictor(std::shared_ptr<const PredictionTables> tables);

  std::size_t predict(std::size_t feature, double u) override;
  void observe(std::size_t feature, std::size_t obs) override;
  const Distribution* last_estimate() const override;

 private:
  std::shared_ptr<const PredictionTables> tables_;
  EwaState state_;
  std::optional<Distribution> last_estimate_;
};

}  // namespace nocl
