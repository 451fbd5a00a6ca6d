#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nocl/hypothesis.hpp"
#include "nocl/noise_kernel.hpp"
#include "nocl/predictor.hpp"

namespace nocl {

// How the (oblivious) adversary picks the round's feature.
struct FeatureRule {
  enum class Kind { FixedSequence, EpochConstant, MaxDisagreement };
  Kind kind = Kind::FixedSequence;
  std::vector<std::size_t> sequence;  // per step (cycled) / per epoch
  std::size_t epoch_len = 1;

  static FeatureRule fixed(std::vector<std::size_t> sequence);
  static FeatureRule epochs(std::vector<std::size_t> per_epoch, std::size_t epoch_len);
  static FeatureRule max_disagreement();

  std::size_t feature_at(std::size_t step, const HypothesisClass& hclass) const;
};

// How the adversary picks the observation law inside the allowed set.
struct NoiseRule {
  enum class Kind { Worst, VertexIndex, UniformMixture };
  Kind kind = Kind::Worst;
  std::size_t vertex = 0;

  static NoiseRule worst() { return {}; }
  static NoiseRule vertex_index(std::size_t v) { return {Kind::VertexIndex, v}; }
  static NoiseRule uniform_mixture() { return {Kind::UniformMixture, 0}; }
};

inline constexpr long kUniformTruth = -1;

struct AdversaryStrategy {
  FeatureRule features;
  NoiseRule noise;
  long ground_truth = 0;  // hypothesis index, or kUniformTruth for a per-run draw
};

// Worst-case observation law per (feature slot, label): the vertex of the
// label's set closest (in squared L2) to the nearest point of the closest
// opposing label set.  Shared read-only across runs.
class WorstLawCache {
 public:
  explicit WorstLawCache(const NoiseKernel& kernel);
  const Distribution& at(std::size_t feature, std::size_t label) const;

 private:
  std::vector<std::vector<Distribution>> by_slot_;
  bool feature_invariant_;
};

struct GameStep {
  std::size_t feature = 0;
  std::size_t true_label = 0;
  std::size_t obs = 0;
  std::size_t predicted = 0;
  bool error = false;
};

struct GameTranscript {
  std::uint64_t seed = 0;
  std::size_t true_hypothesis = 0;
  std::size_t cum_errors = 0;
  bool guarantee_event_held = true;
  bool noise_membership_ok = true;
  std::vector<GameStep> steps;
  std::vector<Distribution> noise_laws;  // per step, only when recording is on
};

// Everything needed to replay one game; shared parts are const so Monte
// Carlo runs can execute concurrently.
struct GameSpec {
  std::shared_ptr<const HypothesisClass> hclass;
  std::shared_ptr<const NoiseKernel> kernel;
  std::function<std::unique_ptr<Predictor>()> make_predictor;
  AdversaryStrategy adversary;
  std::size_t horizon = 0;
  std::shared_ptr<const WorstLawCache> worst_cache;  // built on demand if absent
  bool record_noise_laws = false;
  bool check_membership = false;
};

// One seeded game.  Per round the generator is consumed in a fixed order --
// one uniform for the adversary's law selection, one for the observation
// symbol, one handed to the predictor -- so transcripts with equal
// (spec, seed) are identical and noise streams align across predictors.  A
// uniform ground-truth draw (when requested) happens once before the loop.
GameTranscript run_game(const GameSpec& spec, std::uint64_t seed);

struct RiskSummary {
  std::size_t runs = 0;
  double mean_errors = 0.0;
  std::map<double, double> quantiles;  // delta -> (1 - delta)-quantile of cum errors
  std::size_t guarantee_failures = 0;
};

struct RunRecord {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::size_t cum_errors = 0;
  bool guarantee_event_held = true;
};

struct MonteCarloResult {
  std::vector<RunRecord> rows;
  RiskSummary summary;
};

// Replays run_game with seeds seed0 .. seed0 + runs - 1.  jobs > 1 fans the
// runs out over that many threads; results are byte-identical to the serial
// path because each run owns its generator and rows are written by index.
MonteCarloResult monte_carlo(const GameSpec& spec, std::size_t runs, std::uint64_t seed0,
                             std::span<const double> quantile_deltas, std::size_t jobs);
MonteCarloResult monte_carlo_serial(const GameSpec& spec, std::size_t runs,
                                    std::uint64_t seed0,
                                    std::span<const double> quantile_deltas);

// ceil((1 - delta) * n)-th order statistic (1-indexed) of the run errors.
double order_statistic_quantile(std::vector<std::size_t> errors, double delta);

}  // namespace nocl
