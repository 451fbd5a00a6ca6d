#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "nocl/bayes_oracle.hpp"
#include "nocl/lower_bound.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/pair_tester.hpp"
#include "nocl/random_util.hpp"

using namespace nocl;

TEST_CASE("decision budget") {
  const std::vector<double> flat(200, 0.2);
  const BudgetResult b = disagreement_budget(flat, 0.05);
  CHECK(b.feasible);
  CHECK(b.steps == 37);  // ceil(2 ln 40 / 0.2)
  CHECK(b.total_gap == doctest::Approx(37 * 0.2));

  // 2 ln(2/0.05) = 7.3778; the ramp's prefix sums cross it at its 4th entry.
  const std::vector<double> ramp{0.1, 0.4, 3.0, 4.0, 9.0};
  const BudgetResult r = disagreement_budget(ramp, 0.05);
  CHECK(r.feasible);
  CHECK(r.steps == 4);
  CHECK(r.total_gap == doctest::Approx(7.5));
  CHECK_FALSE(disagreement_budget(std::vector<double>(3, 2.0), 0.05).feasible);
  CHECK_FALSE(disagreement_budget(std::vector<double>(50, 0.0), 0.05).feasible);
  CHECK_FALSE(disagreement_budget({}, 0.05).feasible);
}

TEST_CASE("sequential likelihood tester: decide, freeze, tie") {
  const Distribution p = Distribution::bernoulli(0.2), q = Distribution::bernoulli(0.8);

  LeCamBirgeTester t = LeCamBirgeTester::with_step_budget(3);
  CHECK_FALSE(t.decided());
  CHECK(t.decision() == 1);  // silent default
  t.step(p, q, 0.0, 0);
  t.step(p, q, 0.0, 0);
  CHECK_FALSE(t.decided());
  t.step(p, q, 0.0, 1);  // budget reached; net log-ratio still favors side 1
  CHECK(t.decided());
  CHECK(t.decision() == 1);
  const double frozen_lr = t.lr_log();
  t.step(p, q, 0.0, 1);
  t.step(p, q, 0.0, 1);
  CHECK(t.decision() == 1);
  CHECK(t.lr_log() == frozen_lr);
  CHECK(t.steps_after_decision() == 2);

  LeCamBirgeTester tie = LeCamBirgeTester::with_step_budget(2);
  tie.step(p, q, 0.0, 0);
  tie.step(p, q, 0.0, 1);
  CHECK(tie.lr_log() == doctest::Approx(0.0));
  CHECK(tie.decision() == 1);  // exact tie sides with the first hypothesis

  LeCamBirgeTester sure = LeCamBirgeTester::with_step_budget(1);
  sure.step(Distribution::point_mass(0, 2), Distribution::point_mass(1, 2), 0.0, 1);
  CHECK(sure.decision() == 2);
  CHECK(sure.lr_log() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("sequential tester with a separation goal instead of a step count") {
  const Distribution p = Distribution::bernoulli(0.2), q = Distribution::bernoulli(0.8);
  LeCamBirgeTester t = LeCamBirgeTester::with_gap_goal(1.0);
  t.step(p, q, 0.4, 0);
  CHECK_FALSE(t.decided());
  t.step(p, q, 0.4, 0);
  CHECK_FALSE(t.decided());
  t.step(p, q, 0.4, 0);  // accumulated 1.2 >= 1.0
  CHECK(t.decided());
  CHECK(t.decision() == 1);
  CHECK(t.gap_seen() == doctest::Approx(1.2));

  // A zero goal decides before any evidence arrives and stays on side 1.
  LeCamBirgeTester eager = LeCamBirgeTester::with_gap_goal(0.0);
  CHECK(eager.decided());
  CHECK(eager.decision() == 1);
  eager.step(p, q, 0.4, 1);
  CHECK(eager.decision() == 1);
}

TEST_CASE("running-mean tester") {
  EmpiricalMeanTester t;
  CHECK(t.decision() == 1);  // empty record
  t.step(1);
  CHECK(t.decision() == 2);
  t.step(0);
  CHECK(t.decision() == 1);  // mean exactly 1/2
  t.step(1);
  CHECK(t.decision() == 2);  // 2/3
  t.step(0);
  t.step(0);
  CHECK(t.decision() == 1);  // 2/5, flipped back: no freezing
  CHECK(t.count() == 5);
  CHECK_THROWS_AS(t.step(2), std::invalid_argument);
}

TEST_CASE("pair surrogate charges only contradicted disagreements") {
  CHECK(surrogate_loss(0, 0, 1) == 0);
  CHECK(surrogate_loss(1, 0, 1) == 1);
  CHECK(surrogate_loss(1, 1, 0) == 0);
  CHECK(surrogate_loss(0, 1, 0) == 1);
  CHECK(surrogate_loss(2, 0, 1) == 1);  // contradicting third label still charges i
  CHECK(surrogate_loss(0, 1, 1) == 0);  // agreement steps never charge
  CHECK(surrogate_loss(5, 3, 3) == 0);
}

TEST_CASE("pair anchors cache the separation witnesses") {
  const NoiseKernel kernel = NoiseKernel::massart(0.25);
  const PairAnchorCache cache(kernel, 4);
  const PairAnchor& a = cache.at(2, 0, 1);  // feature index collapses: invariant kernel
  const double root = std::sqrt(0.75) - std::sqrt(0.25);
  CHECK(a.gamma == doctest::Approx(2.0 * root * root).epsilon(1e-9));
  CHECK(cache.min_gamma() == doctest::Approx(a.gamma));
  CHECK(max_abs_diff(a.low, Distribution::bernoulli(0.25)) <= 1e-7);
  CHECK(max_abs_diff(a.high, Distribution::bernoulli(0.75)) <= 1e-7);
}

TEST_CASE("meta predictor eliminates on one decisive hit when the threshold is zero") {
  // Two hypotheses over one feature with far-apart laws; a budget-0 tester
  // decides immediately (side 1), so the first disagreement charges h2.
  const auto hclass = std::make_shared<HypothesisClass>(HypothesisClass::from_table(
      {{0}, {1}}, 2));
  const std::vector<std::vector<Distribution>> table{
      {Distribution::bernoulli(0.05), Distribution::bernoulli(0.95)}};
  const NoiseKernel kernel = NoiseKernel::singleton_table(table);
  const auto anchors = std::make_shared<PairAnchorCache>(kernel, 1);

  MetaPredictor::Options options;
  options.tester = PairTesterKind::LeCamBirge;
  options.threshold = 0.0;
  options.gap_goal = 0.0;  // decides instantly, always side 1 (= h0's label)
  MetaPredictor meta(hclass, anchors, options);

  CHECK(meta.survivors().size() == 2);
  meta.predict(0, 0.3);
  meta.observe(0, 0);  // disagreement: tester says label 0, h1 contradicted
  CHECK(meta.survivors() == std::vector<std::size_t>{0});
  CHECK(meta.row_load(1) > options.threshold);
  CHECK(meta.guarantee_event_held(0));
  CHECK_FALSE(meta.guarantee_event_held(1));
}

TEST_CASE("meta predictor keeps the truth among survivors on realizable streams") {
  const auto hclass = std::make_shared<HypothesisClass>(HypothesisClass::cube(3));
  std::vector<std::vector<Distribution>> table(
      3, {Distribution::bernoulli(0.2), Distribution::bernoulli(0.8)});
  const NoiseKernel kernel = NoiseKernel::singleton_table(table);
  const auto anchors = std::make_shared<PairAnchorCache>(kernel, 3);

  MetaPredictor::Options options;
  options.tester = PairTesterKind::LeCamBirge;
  const double delta = 0.05;
  const double per_pair = delta / (2.0 * 8.0);
  options.gap_goal = 2.0 * std::log(2.0 / per_pair);
  options.threshold = std::ceil(options.gap_goal / anchors->min_gamma());

  std::size_t guarantee_failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    MetaPredictor meta(hclass, anchors, options);
    Rng rng = make_rng(seed, 77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t truth = seed % 8;
    for (int t = 0; t < 240; ++t) {
      const std::size_t x = std::size_t(t) % 3;
      meta.predict(x, unif(rng));
      const double p1 = table[x][hclass->label(truth, x)][1];
      meta.observe(x, unif(rng) < p1 ? 1 : 0);
    }
    if (!meta.guarantee_event_held(truth)) {
      ++guarantee_failures;
      continue;
    }
    const auto& s = meta.survivors();
    CHECK(std::find(s.begin(), s.end(), truth) != s.end());
  }
  CHECK(guarantee_failures <= 5);  // death happens with prob <= delta per run
}

TEST_CASE("meta predictor's uniform draw picks each survivor") {
  const auto hclass = std::make_shared<HypothesisClass>(HypothesisClass::from_table(
      {{0, 0}, {0, 1}, {1, 0}}, 2));
  const std::vector<std::vector<Distribution>> table(
      2, {Distribution::bernoulli(0.1), Distribution::bernoulli(0.9)});
  const NoiseKernel kernel = NoiseKernel::singleton_table(table);
  const auto anchors = std::make_shared<PairAnchorCache>(kernel, 2);
  MetaPredictor::Options options;
  options.threshold = 100.0;
  options.gap_goal = 1e9;  // never decides; everyone survives
  MetaPredictor meta(hclass, anchors, options);
  CHECK(meta.predict(0, 0.0) == 0);    // survivor 0, label 0
  CHECK(meta.predict(0, 0.34) == 0);   // survivor 1, label 0 at feature 0
  CHECK(meta.predict(1, 0.34) == 1);   // survivor 1, label 1 at feature 1
  CHECK(meta.predict(0, 0.67) == 1);   // survivor 2, label 1 at feature 0
  CHECK(meta.predict(0, 0.9999) == 1); // top of the range is the last survivor
}

TEST_CASE("bayes oracle risk: identical, disjoint, and a worked value") {
  const Distribution q = Distribution::bernoulli(0.3);
  CHECK(bayes_oracle_risk(q, q, 6) == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(bayes_oracle_risk(Distribution::point_mass(0, 2), Distribution::point_mass(1, 2),
                          5) == doctest::Approx(0.5).epsilon(1e-12));

  // Worked by hand via binomial sums: rounds t = 0..3 of Bern(0.4) vs
  // Bern(0.6) contribute 0.5, 0.4, 0.4, 0.352.
  CHECK(bayes_oracle_risk(Distribution::bernoulli(0.4), Distribution::bernoulli(0.6), 4) ==
        doctest::Approx(1.652).epsilon(1e-12));

  CHECK_THROWS_AS(bayes_oracle_risk(q, q, 20), std::invalid_argument);
}

TEST_CASE("bayes oracle risk equals a flat enumeration") {
  // Independent re-derivation: enumerate all observation sequences of each
  // length directly instead of walking a prefix tree.
  const Distribution q1 = Distribution::bernoulli(0.35);
  const Distribution q2({0.2, 0.5, 0.3});
  const Distribution q3({0.5, 0.25, 0.25});
  struct Case {
    Distribution a, b;
    std::size_t horizon;
  };
  const Case cases[] = {{q1, Distribution::bernoulli(0.65), 6}, {q2, q3, 5}};
  for (const Case& c : cases) {
    const std::size_t m = c.a.size();
    double flat = 0.0;
    for (std::size_t t = 0; t < c.horizon; ++t) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < t; ++i) total *= m;
      for (std::size_t code = 0; code < total; ++code) {
        double like1 = 1.0, like2 = 1.0;
        std::size_t rest = code;
        for (std::size_t i = 0; i < t; ++i) {
          like1 *= c.a[rest % m];
          like2 *= c.b[rest % m];
          rest /= m;
        }
        flat += 0.5 * std::min(like1, like2);
      }
    }
    CHECK(bayes_oracle_risk(c.a, c.b, c.horizon) == doctest::Approx(flat).epsilon(1e-12));
  }
}

TEST_CASE("hard instance construction") {
  const LowerBoundInstance inst = build_lower_bound_instance(3, 0.02, 300);
  CHECK(inst.hclass.size() == 8);
  CHECK(inst.hclass.num_features() == 3);
  CHECK(inst.gamma_h == doctest::Approx(0.02));
  // epsilon solves 2 - 4 sqrt(1/4 - eps^2) = gamma_h exactly.
  CHECK(2.0 - 4.0 * std::sqrt(0.25 - inst.epsilon * inst.epsilon) ==
        doctest::Approx(0.02).epsilon(1e-10));
  // Per-feature laws are Bern(1/2 -+ eps) singletons.
  const KernelSet s0 = inst.kernel.set_for(1, 0);
  CHECK(s0.kind() == KernelSetKind::Singleton);
  CHECK(s0.vertices()[0][1] == doctest::Approx(0.5 - inst.epsilon));
  CHECK(hellinger_sq(inst.kernel.set_for(0, 0).vertices()[0],
                     inst.kernel.set_for(0, 1).vertices()[0]) ==
        doctest::Approx(0.02).epsilon(1e-10));
  // Feature schedule: tau epochs of horizon/tau steps.
  CHECK(inst.adversary.features.kind == FeatureRule::Kind::EpochConstant);
  CHECK(inst.adversary.features.epoch_len == 100);
  CHECK(inst.adversary.ground_truth == kUniformTruth);
}

TEST_CASE("soft-gap and margin schedules grow as promised") {
  const TwoHypothesisInstance soft = build_soft_gap_instance(0.5, 1.0, 64);
  CHECK(soft.gammas.size() == 64);
  for (std::size_t t = 0; t < 64; ++t) {
    const double expected = std::min(1.0, double(t + 1) / 64.0);
    CHECK(soft.gammas[t] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(hellinger_sq(soft.kernel.set_for(t, 0).vertices()[0],
                       soft.kernel.set_for(t, 1).vertices()[0]) ==
          doctest::Approx(soft.gammas[t]).epsilon(1e-9));
  }
  CHECK(soft.adversary.ground_truth == 1);

  const TwoHypothesisInstance margin = build_tsybakov_instance(0.5, 1.0, 64);
  const std::vector<double>& lambdas = margin.kernel.tsybakov_lambdas();
  for (std::size_t t = 0; t < 64; ++t) {
    const double expected_gamma = 2.0 - 2.0 * std::sqrt(1.0 - lambdas[t] * lambdas[t]);
    CHECK(margin.gammas[t] == doctest::Approx(expected_gamma).epsilon(1e-9));
  }

  // The running-mean mistake envelope: monotone in delta, bounded by T.
  const std::size_t b1 = empirical_mean_error_budget(lambdas, 0.05);
  const std::size_t b2 = empirical_mean_error_budget(lambdas, 0.5);
  CHECK(b1 >= b2);
  CHECK(b1 <= 64);
  CHECK(b2 >= 1);  // the first step always sits under the envelope
}
