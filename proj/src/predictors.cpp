#include "nocl/predictors.hpp"

#include <stdexcept>

namespace nocl {

std::size_t argmax_index(const Distribution& p) {
  std::size_t best = 0;
  for (std::size_t m = 1; m < p.size(); ++m) {
    if (p[m] > p[best]) best = m;  // strict keeps the lowest index on ties
  }
  return best;
}

std::size_t nearest_anchor_label(const Distribution& estimate,
                                 std::span<const Distribution> anchors,
                                 DivergenceKind d) {
  if (anchors.empty()) throw std::invalid_argument("no anchors to choose from");
  if (d != DivergenceKind::L2Sq && d != DivergenceKind::HellingerSq) {
    throw std::invalid_argument("nearest-anchor rule uses L2Sq or HellingerSq");
  }
  const Divergence dv{d, 0.5};
  std::size_t best = 0;
  double best_val = dv(anchors[0], estimate);
  for (std::size_t y = 1; y < anchors.size(); ++y) {
    const double v = dv(anchors[y], estimate);
    if (v < best_val) {
      best_val = v;
      best = y;
    }
  }
  return best;
}

namespace {

PredictionTables assemble_tables(std::vector<std::vector<Distribution>> anchors,
                                 const HypothesisClass& hclass) {
  PredictionTables tables;
  tables.experts.reserve(hclass.size());
  for (std::size_t k = 0; k < hclass.size(); ++k) {
    ExpertFunction f;
    f.id = k;
    f.dist_for.reserve(hclass.num_features());
    for (std::size_t x = 0; x < hclass.num_features(); ++x) {
      f.dist_for.push_back(anchors[x][hclass.label(k, x)]);
    }
    tables.experts.push_back(std::move(f));
  }
  tables.anchors = std::move(anchors);
  return tables;
}

}  // namespace

PredictionTables build_reduction_tables(const NoiseKernel& kernel,
                                        const HypothesisClass& hclass) {
  if (hclass.num_labels() != 2 || kernel.num_labels() != 2) {
    throw std::invalid_argument("closest-pair reduction handles binary labels only");
  }
  std::vector<std::vector<Distribution>> anchors;
  anchors.reserve(hclass.num_features());
  for (std::size_t x = 0; x < hclass.num_features(); ++x) {
    GapReport r = gap(kernel.set_for(x, 0), kernel.set_for(x, 1), DivergenceKind::L2Sq);
    if (!r.converged) throw std::runtime_error("pair solve failed while building anchors");
    anchors.push_back({std::move(r.argmin_a), std::move(r.argmin_b)});
  }
  return assemble_tables(std::move(anchors), hclass);
}

PredictionTables build_representative_tables(const NoiseKernel& kernel,
                                             const HypothesisClass& hclass) {
  const bool ok = kernel.kind() == NoiseKernelKind::Singleton ||
                  kernel.kind() == NoiseKernelKind::RandomizedResponse;
  if (!ok) {
    throw std::invalid_argument(
        "representative anchors need a singleton or randomized-response kernel");
  }
  std::vector<std::vector<Distribution>> anchors;
  anchors.reserve(hclass.num_features());
  for (std::size_t x = 0; x < hclass.num_features(); ++x) {
    std::vector<Distribution> row;
    row.reserve(kernel.num_labels());
    for (std::size_t y = 0; y < kernel.num_labels(); ++y) {
      // singleton: the law itself; randomized response: the fully-noised end
      const KernelSet s = kernel.set_for(x, y);
      row.push_back(s.vertices().back());
    }
    anchors.push_back(std::move(row));
  }
  return assemble_tables(std::move(anchors), hclass);
}

// ---- L2 reduction ---------------------------------------------------------------

L2ReductionPredictor::L2ReductionPredictor(std::shared_ptr<const PredictionTables> tables,
                                           LossSpec spec)
    : tables_(std::move(tables)), state_(tables_->experts.size(), spec) {}

std::size_t L2ReductionPredictor::predict(std::size_t feature, double /*u*/) {
  last_estimate_ = state_.predict(tables_->experts, feature);
  return nearest_anchor_label(*last_estimate_, tables_->anchors[feature],
                              DivergenceKind::L2Sq);
}

void L2ReductionPredictor::observe(std::size_t feature, std::size_t obs) {
  state_.update(tables_->experts, feature, obs);
}

const Distribution* L2ReductionPredictor::last_estimate() const {
  return last_estimate_ ? &*last_estimate_ : nullptr;
}

// ---- argmax on the estimated law --------------------------------------------------

ArgmaxPredictor::ArgmaxPredictor(std::shared_ptr<const PredictionTables> tables)
    : tables_(std::move(tables)), state_(tables_->experts.size(), LossSpec::log_loss()) {}

std::size_t ArgmaxPredictor::predict(std::size_t feature, double /*u*/) {
  last_estimate_ = state_.predict(tables_->experts, feature);
  return argmax_index(*last_estimate_);
}

void ArgmaxPredictor::observe(std::size_t feature, std::size_t obs) {
  state_.update(tables_->experts, feature, obs);
}

const Distribution* ArgmaxPredictor::last_estimate() const {
  return last_estimate_ ? &*last_estimate_ : nullptr;
}

// ---- nearest singleton in Hellinger ------------------------------------------------

HellingerNearestPredictor::HellingerNearestPredictor(
    std::shared_ptr<const PredictionTables> tables)
    : tables_(std::move(tables)), state_(tables_->experts.size(), LossSpec::log_loss()) {}

std::size_t HellingerNearestPredictor::predict(std::size_t feature, double /*u*/) {
  last_estimate_ = state_.predict(tables_->experts, feature);
  return nearest_anchor_label(*last_estimate_, tables_->anchors[feature],
                              DivergenceKind::HellingerSq);
}

void HellingerNearestPredictor::observe(std::size_t feature, std::size_t obs) {
  state_.update(tables_->experts, feature, obs);
}

const Distribution* HellingerNearestPredictor::last_estimate() const {
  return last_estimate_ ? &*last_estimate_ : nullptr;
}

}  // namespace nocl
