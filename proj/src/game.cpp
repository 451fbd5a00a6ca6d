#include "nocl/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nocl/random_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nocl {

FeatureRule FeatureRule::fixed(std::vector<std::size_t> sequence) {
  if (sequence.empty()) throw std::invalid_argument("fixed feature rule needs a sequence");
  FeatureRule r;
  r.kind = Kind::FixedSequence;
  r.sequence = std::move(sequence);
  return r;
}

FeatureRule FeatureRule::epochs(std::vector<std::size_t> per_epoch, std::size_t epoch_len) {
  if (per_epoch.empty() || epoch_len == 0) {
    throw std::invalid_argument("epoch feature rule needs features and a positive length");
  }
  FeatureRule r;
  r.kind = Kind::EpochConstant;
  r.sequence = std::move(per_epoch);
  r.epoch_len = epoch_len;
  return r;
}

FeatureRule FeatureRule::max_disagreement() {
  FeatureRule r;
  r.kind = Kind::MaxDisagreement;
  return r;
}

std::size_t FeatureRule::feature_at(std::size_t step, const HypothesisClass& hclass) const {
  switch (kind) {
    case Kind::FixedSequence:
      return sequence[step % sequence.size()];
    case Kind::EpochConstant: {
      const std::size_t epoch = std::min(step / epoch_len, sequence.size() - 1);
      return sequence[epoch];
    }
    case Kind::MaxDisagreement: {
      // oblivious flavour: evaluated against the full class, so the choice
      // is independent of anything the learner did
      std::vector<std::size_t> all(hclass.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return max_disagreement_feature(hclass, all, step);
    }
  }
  throw std::logic_error("unknown feature rule");
}

WorstLawCache::WorstLawCache(const NoiseKernel& kernel)
    : feature_invariant_(kernel.feature_invariant()) {
  const std::size_t slots = feature_invariant_ ? 1 : kernel.feature_slots();
  const std::size_t labels = kernel.num_labels();
  by_slot_.reserve(slots);
  for (std::size_t x = 0; x < slots; ++x) {
    std::vector<Distribution> row;
    row.reserve(labels);
    for (std::size_t y = 0; y < labels; ++y) {
      // nearest point of the closest opposing set, then the own-set vertex
      // closest to it
      const KernelSet own = kernel.set_for(x, y);
      double best_gap = std::numeric_limits<double>::infinity();
      Distribution target = Distribution::uniform(kernel.arity());
      for (std::size_t other = 0; other < labels; ++other) {
        if (other == y) continue;
        GapReport r = gap(own, kernel.set_for(x, other), DivergenceKind::L2Sq);
        if (r.value < best_gap) {
          best_gap = r.value;
          target = std::move(r.argmin_b);
        }
      }
      Rng unused = make_rng(0);
      row.push_back(sample_from(own, SampleStrategy::worst(std::move(target)), unused));
    }
    by_slot_.push_back(std::move(row));
  }
}

const Distribution& WorstLawCache::at(std::size_t feature, std::size_t label) const {
  return by_slot_.at(feature_invariant_ ? 0 : feature).at(label);
}

namespace {

Distribution pick_noise_law(const GameSpec& spec, std::size_t feature, std::size_t label,
                            double mix_draw) {
  switch (spec.adversary.noise.kind) {
    case NoiseRule::Kind::Worst:
      return spec.worst_cache->at(feature, label);
    case NoiseRule::Kind::VertexIndex: {
      const KernelSet s = spec.kernel->set_for(feature, label);
      Rng unused = make_rng(0);
      return sample_from(s, SampleStrategy::vertex_index(spec.adversary.noise.vertex), unused);
    }
    case NoiseRule::Kind::UniformMixture: {
      const KernelSet s = spec.kernel->set_for(feature, label);
      // a sub-generator keyed by the round's draw keeps the per-round
      // generator consumption flat regardless of the vertex count
      Rng sub = make_rng(static_cast<std::uint64_t>(mix_draw * 9007199254740992.0), 7);
      return sample_from(s, SampleStrategy::uniform_mixture(), sub);
    }
  }
  throw std::logic_error("unknown noise rule");
}

GameSpec with_worst_cache(const GameSpec& spec) {
  GameSpec copy = spec;
  if (!copy.worst_cache && copy.adversary.noise.kind == NoiseRule::Kind::Worst) {
    copy.worst_cache = std::make_shared<const WorstLawCache>(*copy.kernel);
  }
  return copy;
}

}  // namespace

GameTranscript run_game(const GameSpec& spec, std::uint64_t seed) {
  if (!spec.hclass || !spec.kernel || !spec.make_predictor) {
    throw std::invalid_argument("game spec is missing a component");
  }
  if (spec.horizon == 0) throw std::invalid_argument("game horizon must be positive");
  const GameSpec local = with_worst_cache(spec);
  const HypothesisClass& hclass = *local.hclass;

  Rng rng = make_rng(seed, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  GameTranscript out;
  out.seed = seed;
  if (local.adversary.ground_truth == kUniformTruth) {
    out.true_hypothesis =
        std::uniform_int_distribution<std::size_t>(0, hclass.size() - 1)(rng);
  } else {
    if (local.adversary.ground_truth < 0 ||
        static_cast<std::size_t>(local.adversary.ground_truth) >= hclass.size()) {
      throw std::invalid_argument("ground-truth hypothesis out of range");
    }
    out.true_hypothesis = static_cast<std::size_t>(local.adversary.ground_truth);
  }

  std::unique_ptr<Predictor> predictor = local.make_predictor();
  out.steps.reserve(local.horizon);
  if (local.record_noise_laws) out.noise_laws.reserve(local.horizon);

  // the disagreement-count rule is step-invariant (full class, no feedback),
  // so hoist it out of the loop
  const bool hoist_feature =
      local.adversary.features.kind == FeatureRule::Kind::MaxDisagreement;
  const std::size_t hoisted =
      hoist_feature ? local.adversary.features.feature_at(0, hclass) : 0;

  for (std::size_t t = 0; t < local.horizon; ++t) {
    const std::size_t x =
        hoist_feature ? hoisted : local.adversary.features.feature_at(t, hclass);
    const std::size_t y = hclass.label(out.true_hypothesis, x);

    // fixed per-round draw order: law mixture, observation, predictor
    const double u_mix = unif(rng);
    const double u_obs = unif(rng);
    const double u_pred = unif(rng);

    const Distribution law = pick_noise_law(local, x, y, u_mix);
    if (local.check_membership &&
        !local.kernel->set_for(x, y).contains(law, 1e-7)) {
      out.noise_membership_ok = false;
    }
    const std::size_t obs = sample_index(law, u_obs);
    const std::size_t predicted = predictor->predict(x, u_pred);
    predictor->observe(x, obs);

    const bool error = predicted != y;
    out.cum_errors += error;
    out.steps.push_back({x, y, obs, predicted, error});
    if (local.record_noise_laws) out.noise_laws.push_back(law);
  }
  out.guarantee_event_held = predictor->guarantee_event_held(out.true_hypothesis);
  return out;
}

double order_statistic_quantile(std::vector<std::size_t> errors, double delta) {
  if (errors.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0,1)");
  std::sort(errors.begin(), errors.end());
  const auto n = static_cast<double>(errors.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - delta) * n));
  rank = std::max<std::size_t>(rank, 1);
  return static_cast<double>(errors[rank - 1]);
}

namespace {

MonteCarloResult summarize(std::vector<RunRecord> rows,
                           std::span<const double> quantile_deltas) {
  MonteCarloResult out;
  out.summary.runs = rows.size();
  std::vector<std::size_t> errors;
  errors.reserve(rows.size());
  double total = 0.0;
  for (const RunRecord& r : rows) {
    errors.push_back(r.cum_errors);
    total += static_cast<double>(r.cum_errors);
    out.summary.guarantee_failures += r.guarantee_event_held ? 0 : 1;
  }
  out.summary.mean_errors = total / static_cast<double>(rows.size());
  for (double d : quantile_deltas) {
    out.summary.quantiles[d] = order_statistic_quantile(errors, d);
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace

MonteCarloResult monte_carlo(const GameSpec& spec, std::size_t runs, std::uint64_t seed0,
                             std::span<const double> quantile_deltas, std::size_t jobs) {
  if (runs == 0) throw std::invalid_argument("need at least one run");
  const GameSpec local = with_worst_cache(spec);
  std::vector<RunRecord> rows(runs);

#ifdef _OPENMP
  const int threads = jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long long i = 0; i < static_cast<long long>(runs); ++i) {
    const auto run = static_cast<std::size_t>(i);
    const GameTranscript t = run_game(local, seed0 + run);
    rows[run] = RunRecord{run, t.seed, t.cum_errors, t.guarantee_event_held};
  }
  return summarize(std::move(rows), quantile_deltas);
}

MonteCarloResult monte_carlo_serial(const GameSpec& spec, std::size_t runs,
                                    std::uint64_t seed0,
                                    std::span<const double> quantile_deltas) {
  if (runs == 0) throw std::invalid_argument("need at least one run");
  const GameSpec local = with_worst_cache(spec);
  std::vector<RunRecord> rows(runs);
  for (std::size_t run = 0; run < runs; ++run) {
    const GameTranscript t = run_game(local, seed0 + run);
    rows[run] = RunRecord{run, t.seed, t.cum_errors, t.guarantee_event_held};
  }
  return summarize(std::move(rows), quantile_deltas);
}

}  // namespace nocl
