#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "nocl/game.hpp"
#include "nocl/lower_bound.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/predictors.hpp"

using namespace nocl;

TEST_CASE("hypothesis classes") {
  const HypothesisClass cube = HypothesisClass::cube(3);
  CHECK(cube.size() == 8);
  CHECK(cube.num_features() == 3);
  CHECK(cube.label(5, 0) == 1);  // 5 = 0b101
  CHECK(cube.label(5, 1) == 0);
  CHECK(cube.label(5, 2) == 1);

  const HypothesisClass table = HypothesisClass::from_table({{0, 1}, {2, 0}}, 3);
  CHECK(table.num_labels() == 3);
  CHECK(table.label(1, 0) == 2);
  CHECK_THROWS_AS(HypothesisClass::from_table({{0, 1}, {0}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(HypothesisClass::from_table({{0, 2}}, 2), std::invalid_argument);

  const HypothesisClass rand = HypothesisClass::random(12, 5, 3, 99);
  CHECK(rand.size() == 12);
  std::set<std::vector<std::size_t>> rows;
  for (std::size_t k = 0; k < rand.size(); ++k) {
    std::vector<std::size_t> row;
    for (std::size_t x = 0; x < rand.num_features(); ++x) row.push_back(rand.label(k, x));
    rows.insert(row);
  }
  CHECK(rows.size() == 12);  // all distinct
  CHECK_THROWS_AS(HypothesisClass::random(9, 3, 2, 1), std::invalid_argument);  // 2^3 < 9
}

TEST_CASE("feature rules") {
  const HypothesisClass hclass = HypothesisClass::from_table({{0, 0, 1}, {0, 1, 0}}, 2);
  const FeatureRule fixed = FeatureRule::fixed({2, 0});
  CHECK(fixed.feature_at(0, hclass) == 2);
  CHECK(fixed.feature_at(1, hclass) == 0);
  CHECK(fixed.feature_at(2, hclass) == 2);  // cycles

  const FeatureRule epochs = FeatureRule::epochs({1, 2}, 3);
  CHECK(epochs.feature_at(0, hclass) == 1);
  CHECK(epochs.feature_at(2, hclass) == 1);
  CHECK(epochs.feature_at(3, hclass) == 2);
  CHECK(epochs.feature_at(100, hclass) == 2);  // stays on the last epoch

  // Features 1 and 2 each split the two hypotheses; feature 0 does not.
  // The disagreement count ties between 1 and 2, so the lower index wins.
  const FeatureRule md = FeatureRule::max_disagreement();
  CHECK(md.feature_at(0, hclass) == 1);
}

TEST_CASE("order statistic quantile") {
  std::vector<std::size_t> errors{5, 1, 9, 3, 7};
  CHECK(order_statistic_quantile(errors, 0.5) == 5.0);   // ceil(0.5*5) = 3rd of sorted
  CHECK(order_statistic_quantile(errors, 0.2) == 7.0);   // ceil(0.8*5) = 4th
  CHECK(order_statistic_quantile(errors, 0.0) == 9.0);
  CHECK(order_statistic_quantile(errors, 0.999) == 1.0);
  CHECK(order_statistic_quantile({4}, 0.3) == 4.0);
}

namespace {

GameSpec massart_spec(double eta, std::size_t horizon) {
  GameSpec spec;
  spec.hclass = std::make_shared<HypothesisClass>(HypothesisClass::random(8, 4, 2, 5));
  spec.kernel = std::make_shared<NoiseKernel>(NoiseKernel::massart(eta));
  spec.adversary = {FeatureRule::max_disagreement(), NoiseRule::worst(), 2};
  spec.horizon = horizon;
  spec.worst_cache = std::make_shared<WorstLawCache>(*spec.kernel);
  auto tables = std::make_shared<const PredictionTables>(
      build_reduction_tables(*spec.kernel, *spec.hclass));
  spec.make_predictor = [tables] {
    return std::make_unique<L2ReductionPredictor>(tables, LossSpec::brier());
  };
  return spec;
}

}  // namespace

TEST_CASE("games are reproducible and sensitive to the seed") {
  const GameSpec spec = massart_spec(0.3, 150);
  const GameTranscript a = run_game(spec, 42);
  const GameTranscript b = run_game(spec, 42);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    CHECK(a.steps[t].feature == b.steps[t].feature);
    CHECK(a.steps[t].obs == b.steps[t].obs);
    CHECK(a.steps[t].predicted == b.steps[t].predicted);
  }
  CHECK(a.cum_errors == b.cum_errors);

  const GameTranscript c = run_game(spec, 43);
  bool differs = a.cum_errors != c.cum_errors;
  for (std::size_t t = 0; !differs && t < a.steps.size(); ++t)
    differs = a.steps[t].obs != c.steps[t].obs;
  CHECK(differs);
}

TEST_CASE("noiseless play converges to zero late errors") {
  GameSpec spec = massart_spec(0.0, 120);
  const GameTranscript t = run_game(spec, 7);
  // With singleton noiseless laws every feature is revealed on first sight;
  // at most one early error per feature.
  CHECK(t.cum_errors <= spec.hclass->num_features());
  std::size_t late = 0;
  for (std::size_t s = 60; s < t.steps.size(); ++s) late += t.steps[s].error ? 1 : 0;
  CHECK(late == 0);
}

TEST_CASE("sampled laws stay inside the allowed sets") {
  GameSpec spec = massart_spec(0.25, 80);
  spec.check_membership = true;
  spec.record_noise_laws = true;
  spec.adversary.noise = NoiseRule::uniform_mixture();
  const GameTranscript t = run_game(spec, 11);
  CHECK(t.noise_membership_ok);
  REQUIRE(t.noise_laws.size() == 80);
  for (std::size_t s = 0; s < t.noise_laws.size(); ++s) {
    const std::size_t x = t.steps[s].feature;
    const std::size_t y = t.steps[s].true_label;
    CHECK(spec.kernel->set_for(x, y).contains(t.noise_laws[s], 1e-7));
  }
}

TEST_CASE("noise stream is identical across predictors sharing a seed") {
  GameSpec spec1 = massart_spec(0.3, 100);
  GameSpec spec2 = spec1;
  auto tables = std::make_shared<const PredictionTables>(
      build_representative_tables(NoiseKernel::randomized_response(0.5, 2), *spec1.hclass));
  // A completely different predictor must see the same adversarial stream.
  spec2.make_predictor = [tables] { return std::make_unique<ArgmaxPredictor>(tables); };
  const GameTranscript a = run_game(spec1, 99);
  const GameTranscript b = run_game(spec2, 99);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    CHECK(a.steps[t].feature == b.steps[t].feature);
    CHECK(a.steps[t].obs == b.steps[t].obs);
  }
}

TEST_CASE("threaded and serial monte carlo agree exactly") {
  const GameSpec spec = massart_spec(0.3, 60);
  const double deltas[] = {0.1, 0.5};
  const MonteCarloResult serial = monte_carlo_serial(spec, 48, 5, deltas);
  const MonteCarloResult threaded = monte_carlo(spec, 48, 5, deltas, 4);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].seed == threaded.rows[i].seed);
    CHECK(serial.rows[i].cum_errors == threaded.rows[i].cum_errors);
    CHECK(serial.rows[i].guarantee_event_held == threaded.rows[i].guarantee_event_held);
  }
  CHECK(serial.summary.mean_errors == threaded.summary.mean_errors);
  CHECK(serial.summary.quantiles.at(0.1) == threaded.summary.quantiles.at(0.1));
}

TEST_CASE("uniform ground truth draws cover the class") {
  GameSpec spec = massart_spec(0.2, 10);
  spec.adversary.ground_truth = kUniformTruth;
  std::set<std::size_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) seen.insert(run_game(spec, seed).true_hypothesis);
  CHECK(seen.size() == spec.hclass->size());  // all 8 hypotheses appear
}

TEST_CASE("worst-case law cache matches the direct computation") {
  const NoiseKernel kernel = NoiseKernel::massart(0.25);
  const WorstLawCache cache(kernel);
  CHECK(max_abs_diff(cache.at(0, 0), Distribution::bernoulli(0.25)) <= 1e-9);
  CHECK(max_abs_diff(cache.at(3, 1), Distribution::bernoulli(0.75)) <= 1e-9);

  // Slot-dependent kernel: each feature has its own worst pair.
  const std::vector<std::vector<Distribution>> table{
      {Distribution::bernoulli(0.1), Distribution::bernoulli(0.9)},
      {Distribution::bernoulli(0.35), Distribution::bernoulli(0.95)},
  };
  const WorstLawCache slots(NoiseKernel::singleton_table(table));
  CHECK(max_abs_diff(slots.at(1, 0), Distribution::bernoulli(0.35)) <= 1e-12);
  CHECK(max_abs_diff(slots.at(1, 1), Distribution::bernoulli(0.95)) <= 1e-12);
}

TEST_CASE("meta predictor inside the full game loop") {
  GameSpec spec;
  spec.hclass = std::make_shared<HypothesisClass>(HypothesisClass::cube(2));
  std::vector<std::vector<Distribution>> table(
      2, {Distribution::bernoulli(0.15), Distribution::bernoulli(0.85)});
  spec.kernel = std::make_shared<NoiseKernel>(NoiseKernel::singleton_table(table));
  spec.adversary = {FeatureRule::fixed({0, 1}), NoiseRule::worst(), 1};
  spec.horizon = 300;
  spec.worst_cache = std::make_shared<WorstLawCache>(*spec.kernel);

  auto anchors = std::make_shared<const PairAnchorCache>(*spec.kernel, 2);
  MetaPredictor::Options options;
  options.tester = PairTesterKind::LeCamBirge;
  options.gap_goal = 2.0 * std::log(2.0 / (0.05 / 8.0));
  options.threshold = std::ceil(options.gap_goal / anchors->min_gamma());
  auto hclass = spec.hclass;
  spec.make_predictor = [hclass, anchors, options] {
    return std::make_unique<MetaPredictor>(hclass, anchors, options);
  };

  const double deltas[] = {0.05};
  const MonteCarloResult r = monte_carlo_serial(spec, 40, 3, deltas);
  CHECK(r.summary.guarantee_failures <= 4);
  // Errors concentrate early; the threshold also caps the total loosely.
  CHECK(r.summary.mean_errors < 80.0);
}
