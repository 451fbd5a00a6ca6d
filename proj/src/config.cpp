#include "nocl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nocl/lower_bound.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/pair_tester.hpp"
#include "nocl/predictors.hpp"

namespace nocl {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ConfigError(where, message);
}

void expect_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(where + "." + item.key(), "unknown key");
  }
}

const json* opt(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& req(const json& obj, const std::string& where, const char* key) {
  const json* v = opt(obj, key);
  if (v == nullptr) fail(where, std::string("missing required key '") + key + "'");
  return *v;
}

std::string get_string(const json& obj, const std::string& where, const char* key) {
  const json& v = req(obj, where, key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

// Bounds are inclusive unless the matching *_open flag is set.
double get_number(const json& obj, const std::string& where, const char* key, double lo,
                  double hi, bool lo_open = false, bool hi_open = false) {
  const json& v = req(obj, where, key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double x = v.get<double>();
  const bool below = lo_open ? x <= lo : x < lo;
  const bool above = hi_open ? x >= hi : x > hi;
  if (below || above || !std::isfinite(x)) {
    std::ostringstream os;
    os << "value " << x << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi
       << (hi_open ? ")" : "]");
    fail(where + "." + key, os.str());
  }
  return x;
}

std::size_t get_uint(const json& obj, const std::string& where, const char* key,
                     std::size_t lo) {
  const json& v = req(obj, where, key);
  if (!v.is_number_unsigned()) fail(where + "." + key, "expected a non-negative integer");
  const std::size_t x = v.get<std::size_t>();
  if (x < lo) fail(where + "." + key, "value below minimum " + std::to_string(lo));
  return x;
}

std::vector<double> get_number_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(where + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

Distribution get_distribution(const json& v, const std::string& where) {
  try {
    return Distribution(get_number_array(v, where));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

void validate_kernel(const json& v, const std::string& where) {
  expect_object(v, where);
  const std::string name = get_string(v, where, "name");
  if (name == "massart") {
    expect_keys(v, where, {"name", "eta"});
    get_number(v, where, "eta", 0.0, 0.5);
  } else if (name == "randomized-response") {
    expect_keys(v, where, {"name", "eta", "arity"});
    get_number(v, where, "eta", 0.0, 1.0);
    get_uint(v, where, "arity", 2);
  } else if (name == "tsybakov") {
    expect_keys(v, where, {"name", "alpha", "amplitude", "lambdas"});
    get_number(v, where, "alpha", 0.0, 1.0, true, true);
    get_number(v, where, "amplitude", 1.0, 1e9);
    if (const json* l = opt(v, "lambdas")) get_number_array(*l, where + ".lambdas");
  } else if (name == "tv-ball") {
    expect_keys(v, where, {"name", "eps", "canonical"});
    get_number(v, where, "eps", 0.0, 1.0);
    const json& c = req(v, where, "canonical");
    if (!c.is_array() || c.size() < 2) fail(where + ".canonical", "need at least two rows");
    for (std::size_t i = 0; i < c.size(); ++i)
      get_distribution(c[i], where + ".canonical[" + std::to_string(i) + "]");
  } else if (name == "singleton") {
    expect_keys(v, where, {"name", "table"});
    const json& t = req(v, where, "table");
    if (!t.is_array() || t.empty()) fail(where + ".table", "expected [feature][label] rows");
    for (std::size_t x = 0; x < t.size(); ++x) {
      const std::string row = where + ".table[" + std::to_string(x) + "]";
      if (!t[x].is_array() || t[x].size() < 2) fail(row, "need at least two labels");
      for (std::size_t y = 0; y < t[x].size(); ++y)
        get_distribution(t[x][y], row + "[" + std::to_string(y) + "]");
    }
  } else {
    fail(where + ".name", "unknown kernel '" + name + "'");
  }
}

void validate_hclass(const json& v, const std::string& where) {
  expect_object(v, where);
  const std::string type = get_string(v, where, "type");
  if (type == "random") {
    expect_keys(v, where, {"type", "k", "features", "labels", "seed"});
    get_uint(v, where, "k", 2);
    get_uint(v, where, "features", 1);
    get_uint(v, where, "labels", 2);
    if (opt(v, "seed")) get_uint(v, where, "seed", 0);
  } else if (type == "cube") {
    expect_keys(v, where, {"type", "tau"});
    const std::size_t tau = get_uint(v, where, "tau", 1);
    if (tau > 20) fail(where + ".tau", "tau above 20 is not supported");
  } else if (type == "table") {
    expect_keys(v, where, {"type", "labels"});
    const json& rows = req(v, where, "labels");
    if (!rows.is_array() || rows.size() < 2) fail(where + ".labels", "need at least two rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string r = where + ".labels[" + std::to_string(i) + "]";
      if (!rows[i].is_array() || rows[i].empty()) fail(r, "expected a non-empty array");
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        if (!rows[i][j].is_number_unsigned())
          fail(r + "[" + std::to_string(j) + "]", "expected a non-negative integer label");
    }
  } else {
    fail(where + ".type", "unknown hypothesis class type '" + type + "'");
  }
}

void validate_predictor(const json& v, const std::string& where) {
  expect_object(v, where);
  const std::string name = get_string(v, where, "name");
  if (name == "l2-reduction" || name == "logloss-rr" || name == "hellinger-singleton") {
    expect_keys(v, where, {"name"});
  } else if (name == "pairwise-meta") {
    expect_keys(v, where, {"name", "tester", "delta", "threshold"});
    if (const json* t = opt(v, "tester")) {
      if (!t->is_string() || (t->get<std::string>() != "lecam-birge" &&
                              t->get<std::string>() != "empirical-mean"))
        fail(where + ".tester", "expected 'lecam-birge' or 'empirical-mean'");
    }
    if (opt(v, "delta")) get_number(v, where, "delta", 0.0, 1.0, true, true);
    if (opt(v, "threshold")) get_number(v, where, "threshold", 0.0, 1e18);
  } else {
    fail(where + ".name", "unknown predictor '" + name + "'");
  }
}

void validate_adversary(const json& v, const std::string& where) {
  expect_object(v, where);
  expect_keys(v, where, {"features", "noise", "ground_truth"});
  if (const json* f = opt(v, "features")) {
    expect_object(*f, where + ".features");
    const std::string rule = get_string(*f, where + ".features", "rule");
    if (rule == "fixed") {
      expect_keys(*f, where + ".features", {"rule", "sequence"});
      const json& s = req(*f, where + ".features", "sequence");
      if (!s.is_array() || s.empty())
        fail(where + ".features.sequence", "expected a non-empty integer array");
      for (std::size_t i = 0; i < s.size(); ++i)
        if (!s[i].is_number_unsigned())
          fail(where + ".features.sequence[" + std::to_string(i) + "]",
               "expected a non-negative integer");
    } else if (rule == "epochs") {
      expect_keys(*f, where + ".features", {"rule", "sequence", "epoch_len"});
      const json& s = req(*f, where + ".features", "sequence");
      if (!s.is_array() || s.empty())
        fail(where + ".features.sequence", "expected a non-empty integer array");
      for (std::size_t i = 0; i < s.size(); ++i)
        if (!s[i].is_number_unsigned())
          fail(where + ".features.sequence[" + std::to_string(i) + "]",
               "expected a non-negative integer");
      get_uint(*f, where + ".features", "epoch_len", 1);
    } else if (rule == "max-disagreement") {
      expect_keys(*f, where + ".features", {"rule"});
    } else {
      fail(where + ".features.rule", "unknown feature rule '" + rule + "'");
    }
  }
  if (const json* n = opt(v, "noise")) {
    expect_object(*n, where + ".noise");
    const std::string rule = get_string(*n, where + ".noise", "rule");
    if (rule == "worst" || rule == "uniform-mixture") {
      expect_keys(*n, where + ".noise", {"rule"});
    } else if (rule == "vertex") {
      expect_keys(*n, where + ".noise", {"rule", "index"});
      get_uint(*n, where + ".noise", "index", 0);
    } else {
      fail(where + ".noise.rule", "unknown noise rule '" + rule + "'");
    }
  }
  if (const json* g = opt(v, "ground_truth")) {
    if (g->is_string()) {
      if (g->get<std::string>() != "uniform")
        fail(where + ".ground_truth", "expected an index or \"uniform\"");
    } else if (!g->is_number_unsigned()) {
      fail(where + ".ground_truth", "expected an index or \"uniform\"");
    }
  }
}

void validate_preset(const json& v, const std::string& where) {
  expect_object(v, where);
  const std::string name = get_string(v, where, "name");
  if (name == "lower-bound") {
    expect_keys(v, where, {"name", "tau", "gamma_h"});
    const std::size_t tau = get_uint(v, where, "tau", 1);
    if (tau > 20) fail(where + ".tau", "tau above 20 is not supported");
    get_number(v, where, "gamma_h", 0.0, 2.0, true, false);
  } else if (name == "soft-gap" || name == "tsybakov-worst") {
    expect_keys(v, where, {"name", "alpha", "amplitude"});
    get_number(v, where, "alpha", 0.0, 1.0, true, true);
    get_number(v, where, "amplitude", 1.0, 1e9);
  } else {
    fail(where + ".name", "unknown preset '" + name + "'");
  }
}

// --- assembly ---------------------------------------------------------------------

NoiseKernel build_kernel(const json& v, std::size_t horizon) {
  const std::string name = v.at("name").get<std::string>();
  if (name == "massart") return NoiseKernel::massart(v.at("eta").get<double>());
  if (name == "randomized-response")
    return NoiseKernel::randomized_response(v.at("eta").get<double>(),
                                            v.at("arity").get<std::size_t>());
  if (name == "tsybakov") {
    const double alpha = v.at("alpha").get<double>();
    const double amplitude = v.at("amplitude").get<double>();
    if (const json* l = opt(v, "lambdas")) {
      try {
        return NoiseKernel::tsybakov(l->get<std::vector<double>>(), amplitude, alpha);
      } catch (const std::invalid_argument& e) {
        fail("kernel.lambdas", e.what());
      }
    }
    return NoiseKernel::tsybakov_worst_case(amplitude, alpha, horizon);
  }
  if (name == "tv-ball") {
    std::vector<Distribution> canonical;
    const json& c = v.at("canonical");
    for (std::size_t i = 0; i < c.size(); ++i)
      canonical.push_back(get_distribution(c[i], "kernel.canonical[" + std::to_string(i) + "]"));
    try {
      return NoiseKernel::tv_ball(std::move(canonical), v.at("eps").get<double>());
    } catch (const std::invalid_argument& e) {
      fail("kernel", e.what());
    }
  }
  // singleton
  std::vector<std::vector<Distribution>> table;
  const json& t = v.at("table");
  for (std::size_t x = 0; x < t.size(); ++x) {
    std::vector<Distribution> row;
    for (std::size_t y = 0; y < t[x].size(); ++y)
      row.push_back(get_distribution(
          t[x][y], "kernel.table[" + std::to_string(x) + "][" + std::to_string(y) + "]"));
    table.push_back(std::move(row));
  }
  try {
    return NoiseKernel::singleton_table(std::move(table));
  } catch (const std::invalid_argument& e) {
    fail("kernel.table", e.what());
  }
}

HypothesisClass build_hclass(const json& v) {
  const std::string type = v.at("type").get<std::string>();
  try {
    if (type == "random") {
      std::uint64_t seed = 12345;
      if (const json* s = opt(v, "seed")) seed = s->get<std::uint64_t>();
      return HypothesisClass::random(v.at("k").get<std::size_t>(),
                                     v.at("features").get<std::size_t>(),
                                     v.at("labels").get<std::size_t>(), seed);
    }
    if (type == "cube") return HypothesisClass::cube(v.at("tau").get<std::size_t>());
    std::vector<std::vector<std::size_t>> rows =
        v.at("labels").get<std::vector<std::vector<std::size_t>>>();
    std::size_t num_labels = 2;
    for (const auto& r : rows)
      for (std::size_t y : r) num_labels = std::max(num_labels, y + 1);
    return HypothesisClass::from_table(std::move(rows), num_labels);
  } catch (const std::invalid_argument& e) {
    fail("hypothesis_class", e.what());
  }
}

AdversaryStrategy build_adversary(const json* v) {
  AdversaryStrategy adv;
  adv.features = FeatureRule::max_disagreement();
  adv.noise = NoiseRule::worst();
  adv.ground_truth = kUniformTruth;
  if (v == nullptr || v->is_null()) return adv;
  if (const json* f = opt(*v, "features")) {
    const std::string rule = f->at("rule").get<std::string>();
    if (rule == "fixed")
      adv.features = FeatureRule::fixed(f->at("sequence").get<std::vector<std::size_t>>());
    else if (rule == "epochs")
      adv.features = FeatureRule::epochs(f->at("sequence").get<std::vector<std::size_t>>(),
                                         f->at("epoch_len").get<std::size_t>());
    else
      adv.features = FeatureRule::max_disagreement();
  }
  if (const json* n = opt(*v, "noise")) {
    const std::string rule = n->at("rule").get<std::string>();
    if (rule == "worst")
      adv.noise = NoiseRule::worst();
    else if (rule == "vertex")
      adv.noise = NoiseRule::vertex_index(n->at("index").get<std::size_t>());
    else
      adv.noise = NoiseRule::uniform_mixture();
  }
  if (const json* g = opt(*v, "ground_truth")) {
    if (g->is_string())
      adv.ground_truth = kUniformTruth;
    else
      adv.ground_truth = static_cast<long>(g->get<std::size_t>());
  }
  return adv;
}

// Per-step margin magnitudes |2 q(correct) - 1| the running-mean tester sees
// under the worst allowed law, used to size its elimination threshold.
std::vector<double> margin_schedule(const NoiseKernel& kernel, std::size_t horizon) {
  std::vector<double> lambdas(horizon, 0.0);
  if (kernel.kind() == NoiseKernelKind::Tsybakov) {
    const std::vector<double>& slot = kernel.tsybakov_lambdas();
    for (std::size_t t = 0; t < horizon; ++t) lambdas[t] = slot[t % slot.size()];
    return lambdas;
  }
  if (kernel.kind() == NoiseKernelKind::MassartBernoulli) {
    std::fill(lambdas.begin(), lambdas.end(), 1.0 - 2.0 * kernel.eta());
    return lambdas;
  }
  fail("predictor.tester",
       "empirical-mean elimination needs a margin schedule; give an explicit "
       "threshold for this kernel");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to line / column.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 <= stop && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("", "JSON parse error at line " + std::to_string(line) + ", column " +
             std::to_string(col));
  }
  expect_object(doc, "config");
  expect_keys(doc, "config",
              {"kernel", "hypothesis_class", "predictor", "adversary", "preset", "T", "runs",
               "delta", "seed0", "output"});

  ExperimentConfig cfg;
  cfg.horizon = get_uint(doc, "config", "T", 1);
  if (opt(doc, "runs")) cfg.runs = get_uint(doc, "config", "runs", 1);
  if (opt(doc, "delta")) cfg.delta = get_number(doc, "config", "delta", 0.0, 1.0, true, true);
  if (opt(doc, "seed0")) cfg.seed0 = get_uint(doc, "config", "seed0", 0);
  if (const json* o = opt(doc, "output")) {
    if (!o->is_string()) fail("config.output", "expected a string");
    cfg.output = o->get<std::string>();
  }

  const json* preset = opt(doc, "preset");
  const json* kernel = opt(doc, "kernel");
  const json* hclass = opt(doc, "hypothesis_class");
  const json* adversary = opt(doc, "adversary");
  if (preset != nullptr) {
    if (kernel != nullptr || hclass != nullptr || adversary != nullptr)
      fail("config.preset", "a preset replaces kernel, hypothesis_class and adversary");
    validate_preset(*preset, "preset");
    cfg.preset = *preset;
  } else {
    if (kernel == nullptr || hclass == nullptr)
      fail("config", "need either a preset or both kernel and hypothesis_class");
    validate_kernel(*kernel, "kernel");
    validate_hclass(*hclass, "hypothesis_class");
    cfg.kernel = *kernel;
    cfg.hclass = *hclass;
    if (adversary != nullptr) {
      validate_adversary(*adversary, "adversary");
      cfg.adversary = *adversary;
    }
  }

  validate_predictor(req(doc, "config", "predictor"), "predictor");
  cfg.predictor = doc.at("predictor");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ProblemParts assemble_problem(const ExperimentConfig& config) {
  ProblemParts parts;
  if (!config.preset.is_null()) {
    const std::string name = config.preset.at("name").get<std::string>();
    if (name == "lower-bound") {
      LowerBoundInstance inst = build_lower_bound_instance(
          config.preset.at("tau").get<std::size_t>(),
          config.preset.at("gamma_h").get<double>(), config.horizon);
      parts.hclass = std::make_shared<HypothesisClass>(std::move(inst.hclass));
      parts.kernel = std::make_shared<NoiseKernel>(std::move(inst.kernel));
      parts.adversary = inst.adversary;
    } else {
      TwoHypothesisInstance inst =
          name == "soft-gap"
              ? build_soft_gap_instance(config.preset.at("alpha").get<double>(),
                                        config.preset.at("amplitude").get<double>(),
                                        config.horizon)
              : build_tsybakov_instance(config.preset.at("alpha").get<double>(),
                                        config.preset.at("amplitude").get<double>(),
                                        config.horizon);
      parts.hclass = std::make_shared<HypothesisClass>(std::move(inst.hclass));
      parts.kernel = std::make_shared<NoiseKernel>(std::move(inst.kernel));
      parts.adversary = inst.adversary;
    }
  } else {
    parts.kernel = std::make_shared<NoiseKernel>(build_kernel(config.kernel, config.horizon));
    parts.hclass = std::make_shared<HypothesisClass>(build_hclass(config.hclass));
    parts.adversary =
        build_adversary(config.adversary.is_null() ? nullptr : &config.adversary);
  }

  const HypothesisClass& hc = *parts.hclass;
  const NoiseKernel& kernel = *parts.kernel;
  if (hc.num_labels() > kernel.num_labels())
    fail("hypothesis_class", "class uses more labels than the kernel provides");
  if (!kernel.feature_invariant() && hc.num_features() > kernel.feature_slots())
    fail("hypothesis_class", "class has more features than the kernel has slots");
  if (parts.adversary.features.kind == FeatureRule::Kind::FixedSequence ||
      parts.adversary.features.kind == FeatureRule::Kind::EpochConstant) {
    for (std::size_t x : parts.adversary.features.sequence)
      if (x >= hc.num_features())
        fail("adversary.features.sequence", "feature index out of range");
  }
  if (parts.adversary.ground_truth != kUniformTruth &&
      static_cast<std::size_t>(parts.adversary.ground_truth) >= hc.size())
    fail("adversary.ground_truth", "hypothesis index out of range");
  return parts;
}

Experiment assemble_experiment(const ExperimentConfig& config) {
  Experiment exp;
  exp.runs = config.runs;
  exp.delta = config.delta;
  exp.seed0 = config.seed0;
  exp.output = config.output;
  exp.spec.horizon = config.horizon;

  ProblemParts parts = assemble_problem(config);
  exp.spec.hclass = parts.hclass;
  exp.spec.kernel = parts.kernel;
  exp.spec.adversary = parts.adversary;
  exp.kernel_name = exp.spec.kernel->name();

  const HypothesisClass& hc = *exp.spec.hclass;
  const NoiseKernel& kernel = *exp.spec.kernel;

  const std::string pname = config.predictor.at("name").get<std::string>();
  exp.predictor_name = pname;
  try {
    if (pname == "l2-reduction") {
      if (hc.num_labels() != 2)
        fail("predictor", "l2-reduction handles binary labels only");
      auto tables =
          std::make_shared<const PredictionTables>(build_reduction_tables(kernel, hc));
      exp.spec.make_predictor = [tables] {
        return std::make_unique<L2ReductionPredictor>(tables, LossSpec::brier());
      };
    } else if (pname == "logloss-rr") {
      if (hc.num_labels() != kernel.arity())
        fail("predictor", "logloss-rr needs matching label and observation alphabets");
      auto tables =
          std::make_shared<const PredictionTables>(build_representative_tables(kernel, hc));
      exp.spec.make_predictor = [tables] { return std::make_unique<ArgmaxPredictor>(tables); };
    } else if (pname == "hellinger-singleton") {
      auto tables =
          std::make_shared<const PredictionTables>(build_representative_tables(kernel, hc));
      exp.spec.make_predictor = [tables] {
        return std::make_unique<HellingerNearestPredictor>(tables);
      };
    } else {  // pairwise-meta
      const std::size_t k = hc.size();
      double delta_meta = config.delta;
      if (const json* d = opt(config.predictor, "delta")) delta_meta = d->get<double>();
      const double per_pair_delta = delta_meta / (2.0 * static_cast<double>(k));

      MetaPredictor::Options options;
      std::string tester = "lecam-birge";
      if (const json* t = opt(config.predictor, "tester")) tester = t->get<std::string>();
      options.tester = tester == "empirical-mean" ? PairTesterKind::EmpiricalMean
                                                  : PairTesterKind::LeCamBirge;
      options.gap_goal = 2.0 * std::log(2.0 / per_pair_delta);

      std::shared_ptr<const PairAnchorCache> anchors;
      if (options.tester == PairTesterKind::LeCamBirge)
        anchors = std::make_shared<const PairAnchorCache>(kernel, hc.num_features());
      if (options.tester == PairTesterKind::EmpiricalMean && hc.num_labels() != 2)
        fail("predictor", "empirical-mean testing handles binary labels only");

      if (const json* c = opt(config.predictor, "threshold")) {
        options.threshold = c->get<double>();
      } else if (options.tester == PairTesterKind::LeCamBirge) {
        // Worst-pair separation accumulated step by step; the threshold is
        // the number of disagreement steps a tester may need before its
        // decision is trustworthy at level delta / (2K).
        std::vector<double> schedule(config.horizon, 0.0);
        const std::size_t slots = kernel.feature_invariant() ? 1 : kernel.feature_slots();
        for (std::size_t t = 0; t < config.horizon; ++t) {
          const std::size_t x = kernel.feature_invariant() ? 0 : t % slots;
          double g = std::numeric_limits<double>::infinity();
          for (std::size_t a = 0; a + 1 < hc.num_labels(); ++a)
            for (std::size_t b = a + 1; b < hc.num_labels(); ++b)
              g = std::min(g, anchors->at(x, a, b).gamma);
          schedule[t] = g;
        }
        const BudgetResult budget = disagreement_budget(schedule, per_pair_delta);
        options.threshold =
            budget.feasible ? static_cast<double>(budget.steps)
                            : static_cast<double>(config.horizon);
      } else {
        options.threshold = static_cast<double>(
            empirical_mean_error_budget(margin_schedule(kernel, config.horizon),
                                        per_pair_delta));
      }

      auto hclass_shared = exp.spec.hclass;
      exp.spec.make_predictor = [hclass_shared, anchors, options] {
        return std::make_unique<MetaPredictor>(hclass_shared, anchors, options);
      };
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("predictor", e.what());
  }

  if (exp.spec.adversary.noise.kind == NoiseRule::Kind::Worst)
    exp.spec.worst_cache = std::make_shared<const WorstLawCache>(kernel);
  return exp;
}

}  // namespace nocl
