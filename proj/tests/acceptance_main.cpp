// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Bounds are computed from the same closed forms the library
// exposes; nothing here is tuned to the measured values.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nocl/bayes_oracle.hpp"
#include "nocl/distribution.hpp"
#include "nocl/game.hpp"
#include "nocl/hypothesis.hpp"
#include "nocl/lower_bound.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/noise_kernel.hpp"
#include "nocl/pair_tester.hpp"
#include "nocl/predictors.hpp"
#include "nocl/random_util.hpp"
#include "nocl/svg.hpp"
#include "nocl/verify.hpp"

using namespace nocl;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

bool g_all_ok = true;

void report(const char* id, const char* what, bool ok, const std::string& detail) {
  std::printf("[%s] %s %-42s %s\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  g_all_ok = g_all_ok && ok;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

std::vector<std::size_t> errors_of(const MonteCarloResult& res) {
  std::vector<std::size_t> out;
  out.reserve(res.rows.size());
  for (const RunRecord& r : res.rows) out.push_back(r.cum_errors);
  return out;
}

// Shared setup for A1/A2: bounded label flips, 16 random binary hypotheses.
GameSpec bounded_noise_spec(std::size_t horizon) {
  auto hclass = std::make_shared<const HypothesisClass>(HypothesisClass::random(16, 8, 2, 101));
  auto kernel = std::make_shared<const NoiseKernel>(NoiseKernel::massart(0.25));
  auto tables =
      std::make_shared<const PredictionTables>(build_reduction_tables(*kernel, *hclass));
  GameSpec spec;
  spec.hclass = hclass;
  spec.kernel = kernel;
  spec.make_predictor = [tables] {
    return std::make_unique<L2ReductionPredictor>(tables, LossSpec::brier());
  };
  spec.adversary = {FeatureRule::max_disagreement(), NoiseRule::worst(), kUniformTruth};
  spec.horizon = horizon;
  spec.worst_cache = std::make_shared<const WorstLawCache>(*kernel);
  return spec;
}

void a1_bounded_noise_bound() {
  Stopwatch sw;
  const GameSpec spec = bounded_noise_spec(2000);
  const MonteCarloResult res = monte_carlo(spec, 200, 11, {}, 0);
  const double gamma_l = 2.0 * (1.0 - 2.0 * 0.25) * (1.0 - 2.0 * 0.25);  // = 0.5
  const double bound = 16.0 * std::log(16.0) / gamma_l;
  const double elapsed = sw.seconds();
  const bool ok = res.summary.mean_errors <= bound && elapsed < 30.0;
  report("A1", "bounded-noise mistake bound", ok,
         fmt("mean=%.2f <= %.2f over 200 runs at T=2000 (%.1fs)", res.summary.mean_errors,
             bound, elapsed));
}

void a2_horizon_free_risk() {
  const std::size_t t_lo = 1 << 10, t_hi = 1 << 14;
  GameSpec spec = bounded_noise_spec(t_lo);
  const MonteCarloResult lo = monte_carlo(spec, 200, 21, {}, 0);
  spec.horizon = t_hi;
  const MonteCarloResult hi = monte_carlo(spec, 200, 21, {}, 0);
  const double m_lo = std::max(order_statistic_quantile(errors_of(lo), 0.5), 0.5);
  const double m_hi = std::max(order_statistic_quantile(errors_of(hi), 0.5), 0.5);
  const double reldiff = std::abs(m_lo - m_hi) / std::max(m_lo, m_hi);
  const double slope =
      std::log(m_hi / m_lo) / (std::log(double(t_hi)) - std::log(double(t_lo)));
  const bool ok = reldiff < 0.15 && std::abs(slope) < 0.1;
  report("A2", "risk is flat in the horizon", ok,
         fmt("median %.0f @T=%zu vs %.0f @T=%zu, reldiff=%.1f%%, slope=%.3f", m_lo, t_lo,
             m_hi, t_hi, 100.0 * reldiff, slope));
}

void a3_uniform_flip_bound() {
  const double eta = 0.5, delta = 0.05;
  auto hclass = std::make_shared<const HypothesisClass>(HypothesisClass::random(32, 8, 2, 202));
  auto kernel = std::make_shared<const NoiseKernel>(NoiseKernel::randomized_response(eta, 2));
  auto tables =
      std::make_shared<const PredictionTables>(build_representative_tables(*kernel, *hclass));
  GameSpec spec;
  spec.hclass = hclass;
  spec.kernel = kernel;
  spec.make_predictor = [tables] { return std::make_unique<ArgmaxPredictor>(tables); };
  spec.adversary = {FeatureRule::max_disagreement(), NoiseRule::worst(), kUniformTruth};
  spec.horizon = 2000;
  spec.worst_cache = std::make_shared<const WorstLawCache>(*kernel);
  const std::array<double, 1> deltas{delta};
  const MonteCarloResult res = monte_carlo(spec, 200, 31, deltas, 0);
  const double mean_bound = std::log(32.0) / ((1.0 - eta) * (1.0 - eta) / 2.0);
  const double quant_bound =
      (std::log(32.0) + 2.0 * std::log(1.0 / delta)) / ((1.0 - eta) * (1.0 - eta) / 4.0);
  const double q = res.summary.quantiles.at(delta);
  const bool ok = res.summary.mean_errors <= mean_bound && q <= quant_bound;
  report("A3", "uniform-flip log-loss bound", ok,
         fmt("mean=%.2f <= %.2f, q95=%.0f <= %.1f (200 runs)", res.summary.mean_errors,
             mean_bound, q, quant_bound));
}

void a4_elimination_meta_bound() {
  Stopwatch sw;
  const double gamma_h = 0.2, delta = 0.05;
  const std::size_t horizon = 2000, runs = 1000;
  // Two fixed laws separated by exactly gamma_h in squared Hellinger.
  const double root = (2.0 - gamma_h) / 4.0;
  const double eps = std::sqrt(0.25 - root * root);
  auto hclass = std::make_shared<const HypothesisClass>(HypothesisClass::cube(4));
  const std::vector<Distribution> row{Distribution::bernoulli(0.5 - eps),
                                      Distribution::bernoulli(0.5 + eps)};
  auto kernel = std::make_shared<const NoiseKernel>(
      NoiseKernel::singleton_table(std::vector<std::vector<Distribution>>(4, row)));
  auto anchors =
      std::make_shared<const PairAnchorCache>(*kernel, hclass->num_features());
  const double k = double(hclass->size());
  const double per_pair_delta = delta / (2.0 * k);
  const std::vector<double> schedule(horizon, anchors->min_gamma());
  const BudgetResult budget = disagreement_budget(schedule, per_pair_delta);
  MetaPredictor::Options options;
  options.tester = PairTesterKind::LeCamBirge;
  options.threshold = budget.feasible ? double(budget.steps) : double(horizon);
  options.gap_goal = 2.0 * std::log(2.0 / per_pair_delta);
  GameSpec spec;
  spec.hclass = hclass;
  spec.kernel = kernel;
  spec.make_predictor = [hclass, anchors, options] {
    return std::make_unique<MetaPredictor>(hclass, anchors, options);
  };
  spec.adversary = {FeatureRule::max_disagreement(), NoiseRule::worst(), kUniformTruth};
  spec.horizon = horizon;
  spec.worst_cache = std::make_shared<const WorstLawCache>(*kernel);
  const MonteCarloResult res = monte_carlo(spec, runs, 41, {}, 0);
  const double bound =
      8.0 * std::log(4.0 * k / delta) * std::log(k) / gamma_h + std::log(2.0 / delta);
  std::size_t within = 0;
  for (const RunRecord& r : res.rows) within += r.cum_errors <= bound ? 1 : 0;
  const double freq = double(within) / double(runs);
  const double elapsed = sw.seconds();
  const bool ok = freq >= 0.95 && elapsed < 120.0;
  report("A4", "pairwise elimination risk bound", ok,
         fmt("P[errors <= %.1f]=%.3f >= 0.95, C=%zu steps, 1000 runs (%.1fs)", bound, freq,
             budget.steps, elapsed));
}

void a5_sequential_test_error() {
  const double delta = 0.1;
  const NoiseKernel kernel = NoiseKernel::massart(0.25);
  const PairAnchorCache cache(kernel, 1);
  const PairAnchor& anchor = cache.at(0, 0, 1);
  const std::vector<double> schedule(1000, anchor.gamma);
  const BudgetResult budget = disagreement_budget(schedule, delta);
  const WorstLawCache worst(kernel);
  const std::size_t runs = 10000;
  std::size_t wrong = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    const std::size_t truth = run % 2;
    Rng rng = make_rng(51 + run, 5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Distribution& law = worst.at(0, truth);
    LeCamBirgeTester tester = LeCamBirgeTester::with_step_budget(budget.steps);
    for (std::size_t s = 0; s < budget.steps; ++s)
      tester.step(anchor.low, anchor.high, anchor.gamma, sample_index(law, unif(rng)));
    const int want = truth == 0 ? 1 : 2;
    if (!tester.decided() || tester.decision() != want) ++wrong;
  }
  const double rate = double(wrong) / double(runs);
  const bool ok = rate <= delta + 0.01;
  report("A5", "sequential pair test error rate", ok,
         fmt("wrong=%.4f <= %.2f with a %zu-step budget, %zu runs", rate, delta + 0.01,
             budget.steps, runs));
}

void a6_hard_instance_floor() {
  const std::size_t tau = 4, horizon = 1024, runs = 200;
  const double gamma_h = 0.02;
  const double floor = 0.05 * double(tau) / gamma_h;

  LowerBoundInstance inst = build_lower_bound_instance(tau, gamma_h, horizon);
  auto hclass = std::make_shared<const HypothesisClass>(std::move(inst.hclass));
  auto kernel = std::make_shared<const NoiseKernel>(std::move(inst.kernel));
  GameSpec spec;
  spec.hclass = hclass;
  spec.kernel = kernel;
  spec.adversary = inst.adversary;
  spec.horizon = horizon;
  spec.worst_cache = std::make_shared<const WorstLawCache>(*kernel);

  auto reduction =
      std::make_shared<const PredictionTables>(build_reduction_tables(*kernel, *hclass));
  auto representative =
      std::make_shared<const PredictionTables>(build_representative_tables(*kernel, *hclass));
  auto anchors = std::make_shared<const PairAnchorCache>(*kernel, hclass->num_features());
  const double per_pair_delta = 0.05 / (2.0 * double(hclass->size()));
  const BudgetResult budget =
      disagreement_budget(std::vector<double>(horizon, anchors->min_gamma()), per_pair_delta);
  MetaPredictor::Options options;
  options.tester = PairTesterKind::LeCamBirge;
  options.threshold = budget.feasible ? double(budget.steps) : double(horizon);
  options.gap_goal = 2.0 * std::log(2.0 / per_pair_delta);

  struct Entry {
    const char* name;
    std::function<std::unique_ptr<Predictor>()> make;
  };
  const Entry entries[] = {
      {"l2-reduction",
       [reduction] {
         return std::make_unique<L2ReductionPredictor>(reduction, LossSpec::brier());
       }},
      {"logloss-rr",
       [representative] { return std::make_unique<ArgmaxPredictor>(representative); }},
      {"hellinger-singleton",
       [representative] {
         return std::make_unique<HellingerNearestPredictor>(representative);
       }},
      {"pairwise-meta",
       [hclass, anchors, options] {
         return std::make_unique<MetaPredictor>(hclass, anchors, options);
       }},
  };
  bool ok = true;
  std::string detail = fmt("floor=%.0f:", floor);
  std::uint64_t seed0 = 61;
  for (const Entry& e : entries) {
    spec.make_predictor = e.make;
    const MonteCarloResult res = monte_carlo(spec, runs, seed0++, {}, 0);
    ok = ok && res.summary.mean_errors >= floor;
    detail += fmt(" %s=%.1f", e.name, res.summary.mean_errors);
  }

  // Exact oracle parity: prefix-tree value vs a flat per-step enumeration.
  const LowerBoundInstance micro = build_lower_bound_instance(1, gamma_h, 8);
  const Distribution q0 = micro.kernel.set_for(0, 0).vertices()[0];
  const Distribution q1 = micro.kernel.set_for(0, 1).vertices()[0];
  double worst_gap = 0.0;
  for (std::size_t horizon_t = 1; horizon_t <= 8; ++horizon_t) {
    double flat = 0.0;
    for (std::size_t t = 0; t < horizon_t; ++t) {
      double layer = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << t); ++mask) {
        double p0 = 1.0, p1 = 1.0;
        for (std::size_t s = 0; s < t; ++s) {
          const std::size_t bit = (mask >> s) & 1;
          p0 *= q0[bit];
          p1 *= q1[bit];
        }
        layer += std::min(p0, p1);
      }
      flat += 0.5 * layer;
    }
    worst_gap = std::max(worst_gap, std::abs(bayes_oracle_risk(q0, q1, horizon_t) - flat));
  }
  ok = ok && worst_gap <= 1e-12;
  detail += fmt("; oracle parity gap %.1e", worst_gap);
  report("A6", "hard-instance risk floor", ok, detail);
}

// Wrong-vote count of the running-mean test on the worst-case margin
// schedule, averaged over observation draws.
double mean_margin_test_errors(double alpha, std::size_t horizon, std::uint64_t seed0) {
  const TwoHypothesisInstance inst = build_tsybakov_instance(alpha, 1.0, horizon);
  const std::size_t runs = 64;
  double total = 0.0;
  for (std::size_t run = 0; run < runs; ++run) {
    Rng rng = make_rng(seed0 + run, 7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    EmpiricalMeanTester tester;
    std::size_t wrong = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      // Margin lambda_t recovered from the pair separation 2-2*sqrt(1-l^2).
      const double g = inst.gammas[t];
      const double lam = std::sqrt(std::max(0.0, g - 0.25 * g * g));
      const int agrees = unif(rng) < 0.5 + 0.5 * lam ? 1 : 0;
      tester.step(agrees);
      if (tester.decision() != 2) ++wrong;
    }
    total += double(wrong);
  }
  return total / double(runs);
}

// Wrong-vote count of the separation-budgeted likelihood test on the rising
// soft-gap schedule (truth on side 2 throughout).
double mean_soft_gap_test_errors(double alpha, std::size_t horizon, std::uint64_t seed0) {
  const TwoHypothesisInstance inst = build_soft_gap_instance(alpha, 1.0, horizon);
  const WorstLawCache cache(inst.kernel);
  const double goal = 2.0 * std::log(2.0 / 0.05);
  const std::size_t runs = 64;
  double total = 0.0;
  for (std::size_t run = 0; run < runs; ++run) {
    Rng rng = make_rng(seed0 + run, 9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    LeCamBirgeTester tester = LeCamBirgeTester::with_gap_goal(goal);
    std::size_t wrong = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const Distribution& p = cache.at(t, 0);
      const Distribution& q = cache.at(t, 1);
      tester.step(p, q, inst.gammas[t], sample_index(q, unif(rng)));
      if (tester.decision() != 2) ++wrong;
    }
    total += double(wrong);
  }
  return total / double(runs);
}

void a7_scaling_exponents() {
  Stopwatch sw;
  const std::array<std::size_t, 6> horizons{256, 512, 1024, 2048, 4096, 8192};
  bool ok = true;
  std::string detail;
  std::uint64_t seed0 = 71;
  for (const double alpha : {0.25, 0.5}) {
    std::vector<double> lt, margin_lm, soft_lm;
    for (const std::size_t t : horizons) {
      lt.push_back(std::log(double(t)));
      margin_lm.push_back(
          std::log(std::max(mean_margin_test_errors(alpha, t, seed0 += 100), 0.5)));
      soft_lm.push_back(
          std::log(std::max(mean_soft_gap_test_errors(alpha, t, seed0 += 100), 0.5)));
    }
    const double margin_slope = least_squares_slope(lt, margin_lm);
    const double margin_target = 2.0 * (1.0 - alpha) / (2.0 - alpha);
    const double soft_slope = least_squares_slope(lt, soft_lm);
    const double soft_target = 1.0 - alpha;
    ok = ok && std::abs(margin_slope - margin_target) <= 0.15 &&
         std::abs(soft_slope - soft_target) <= 0.15;
    detail += fmt("a=%.2f margin %.2f~%.2f soft %.2f~%.2f; ", alpha, margin_slope,
                  margin_target, soft_slope, soft_target);
  }
  const double elapsed = sw.seconds();
  ok = ok && elapsed < 300.0;
  report("A7", "soft-separation scaling exponents", ok,
         detail + fmt("T=256..8192 (%.1fs)", elapsed));
}

void a8_identity_suite() {
  Stopwatch sw;
  const std::vector<PropertyResult> results = verify_suite("all", 2026);
  const double elapsed = sw.seconds();
  std::size_t failed = 0;
  std::string first;
  for (const PropertyResult& r : results)
    if (!r.passed && failed++ == 0) first = r.name;
  const bool ok = failed == 0 && elapsed < 5.0;
  report("A8", "deterministic identity suite", ok,
         failed == 0 ? fmt("%zu properties in %.2fs", results.size(), elapsed)
                     : fmt("%zu of %zu failed, first: %s (%.2fs)", failed, results.size(),
                           first.c_str(), elapsed));
}

}  // namespace

int main() {
  a1_bounded_noise_bound();
  a2_horizon_free_risk();
  a3_uniform_flip_bound();
  a4_elimination_meta_bound();
  a5_sequential_test_error();
  a6_hard_instance_floor();
  a7_scaling_exponents();
  a8_identity_suite();
  std::printf("acceptance: %s\n", g_all_ok ? "all criteria passed" : "FAILURES above");
  return g_all_ok ? 0 : 1;
}
