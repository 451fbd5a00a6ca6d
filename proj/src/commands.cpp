#include "nocl/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "nocl/config.hpp"
#include "nocl/csv.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/pair_tester.hpp"
#include "nocl/svg.hpp"
#include "nocl/verify.hpp"

namespace nocl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::string divergence_label(DivergenceKind d) {
  switch (d) {
    case DivergenceKind::L2Sq: return "squared-l2";
    case DivergenceKind::HellingerSq: return "squared-hellinger";
    case DivergenceKind::TV: return "total-variation";
    default: return "?";
  }
}

std::string print_distribution(const Distribution& p) {
  std::string out = "(";
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (m > 0) out += ", ";
    out += format_double(p[m]);
  }
  return out + ")";
}

Experiment load_experiment(const std::string& config_path, const CommonOverrides& o) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (o.seed0) cfg.seed0 = *o.seed0;
  if (o.output) cfg.output = *o.output;
  return assemble_experiment(cfg);
}

MonteCarloResult run_experiment(const Experiment& exp, std::size_t jobs) {
  const double deltas[] = {exp.delta, 0.1, 0.5};
  return monte_carlo(exp.spec, exp.runs, exp.seed0, deltas, jobs);
}

void print_summary(const Experiment& exp, const MonteCarloResult& result,
                   std::ostream& log) {
  const RiskSummary& s = result.summary;
  log << "predictor: " << exp.predictor_name << "\n"
      << "kernel: " << exp.kernel_name << "\n"
      << "hypotheses: " << exp.spec.hclass->size()
      << ", features: " << exp.spec.hclass->num_features()
      << ", labels: " << exp.spec.hclass->num_labels() << "\n"
      << "horizon: " << exp.spec.horizon << ", runs: " << s.runs << ", seed0: " << exp.seed0
      << "\n"
      << "mean cumulative errors: " << format_double(s.mean_errors) << "\n";
  for (const auto& [delta, q] : s.quantiles)
    log << "errors at confidence " << format_double(1.0 - delta) << ": " << format_double(q)
        << "\n";
  log << "guarantee event failures: " << s.guarantee_failures << " / " << s.runs << "\n";
}

std::vector<SummaryRow> to_rows(const Experiment& exp, const MonteCarloResult& result) {
  std::vector<SummaryRow> rows;
  rows.reserve(result.rows.size());
  for (const RunRecord& r : result.rows)
    rows.push_back({r.run_id, r.seed, exp.predictor_name, exp.kernel_name, exp.spec.horizon,
                    r.cum_errors, r.guarantee_event_held});
  return rows;
}

ExperimentConfig with_axis_value(ExperimentConfig cfg, const std::string& axis, double v) {
  const bool integral = std::abs(v - std::round(v)) < 1e-9;
  if (axis == "T") {
    if (!integral || v < 1.0) throw ConfigError("sweep", "T values must be positive integers");
    cfg.horizon = static_cast<std::size_t>(std::llround(v));
  } else if (axis == "eta") {
    if (cfg.kernel.is_null() || !cfg.kernel.contains("eta"))
      throw ConfigError("sweep", "eta sweeps need a kernel with an eta parameter");
    cfg.kernel["eta"] = v;
  } else if (axis == "alpha") {
    if (!cfg.preset.is_null() && cfg.preset.contains("alpha"))
      cfg.preset["alpha"] = v;
    else if (!cfg.kernel.is_null() && cfg.kernel.contains("alpha"))
      cfg.kernel["alpha"] = v;
    else
      throw ConfigError("sweep", "alpha sweeps need a margin-profile kernel or preset");
  } else if (axis == "K") {
    if (!integral || v < 2.0)
      throw ConfigError("sweep", "K values must be integers of at least 2");
    const std::size_t k = static_cast<std::size_t>(std::llround(v));
    auto log2_exact = [](std::size_t n) -> std::optional<std::size_t> {
      std::size_t bits = 0, m = n;
      while (m > 1) {
        m >>= 1;
        ++bits;
      }
      return (std::size_t{1} << bits) == n ? std::optional<std::size_t>(bits) : std::nullopt;
    };
    if (!cfg.hclass.is_null() && cfg.hclass.contains("k")) {
      cfg.hclass["k"] = k;
    } else if (!cfg.hclass.is_null() && cfg.hclass.contains("tau")) {
      const auto bits = log2_exact(k);
      if (!bits) throw ConfigError("sweep", "cube classes need power-of-two K values");
      cfg.hclass["tau"] = *bits;
    } else if (!cfg.preset.is_null() && cfg.preset.contains("tau")) {
      const auto bits = log2_exact(k);
      if (!bits) throw ConfigError("sweep", "cube presets need power-of-two K values");
      cfg.preset["tau"] = *bits;
    } else {
      throw ConfigError("sweep", "K sweeps need a sized class or cube preset");
    }
  } else {
    throw ConfigError("sweep", "unknown axis '" + axis + "' (use T, eta, alpha or K)");
  }
  return cfg;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const CommonOverrides& overrides,
                 std::ostream& log) {
  try {
    const auto start = Clock::now();
    const Experiment exp = load_experiment(config_path, overrides);
    const MonteCarloResult result = run_experiment(exp, overrides.jobs);
    print_summary(exp, result, log);
    const std::string path = exp.output + "_summary.csv";
    ensure_parent_dir(path);
    const std::vector<SummaryRow> rows = to_rows(exp, result);
    write_summary_csv(path, rows);
    log << "summary written to " << path << "\n";
    log << "elapsed: " << format_double(seconds_since(start)) << " s\n";
    return exit_code::kOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRuntime;
  }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& log) {
  try {
    const auto start = Clock::now();
    const std::vector<PropertyResult> results = verify_suite(suite, seed);
    std::size_t passed = 0;
    for (const PropertyResult& r : results) {
      log << (r.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(36) << r.name
          << " worst=" << format_double(r.worst);
      if (!r.note.empty()) log << "  (" << r.note << ")";
      log << "\n";
      if (r.passed) ++passed;
    }
    log << "suite " << suite << ": " << passed << "/" << results.size() << " passed in "
        << format_double(seconds_since(start)) << " s\n";
    return passed == results.size() ? exit_code::kOk : exit_code::kProperty;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRuntime;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<double>& values, const CommonOverrides& overrides,
              std::ostream& log) {
  try {
    if (values.empty()) throw ConfigError("sweep", "no axis values given");
    ExperimentConfig base = parse_config_file(config_path);
    if (overrides.seed0) base.seed0 = *overrides.seed0;
    if (overrides.output) base.output = *overrides.output;

    std::vector<CurveRow> curve;
    for (const double v : values) {
      const ExperimentConfig cfg = with_axis_value(base, axis, v);
      const Experiment exp = assemble_experiment(cfg);
      const MonteCarloResult result = run_experiment(exp, overrides.jobs);
      std::vector<std::size_t> errors;
      errors.reserve(result.rows.size());
      for (const RunRecord& r : result.rows) errors.push_back(r.cum_errors);
      CurveRow row;
      row.x = v;
      row.median = order_statistic_quantile(errors, 0.5);
      row.q90 = order_statistic_quantile(errors, 0.1);
      row.mean = result.summary.mean_errors;
      curve.push_back(row);
      log << axis << "=" << format_double(v) << "  median=" << format_double(row.median)
          << "  q90=" << format_double(row.q90) << "  mean=" << format_double(row.mean)
          << "\n";
    }

    const std::string csv_path = base.output + "_curve.csv";
    ensure_parent_dir(csv_path);
    write_curve_csv(csv_path, axis, curve);
    log << "curve written to " << csv_path << "\n";

    const bool log_log = axis == "T";
    ChartSeries median_series{"median", {}, {}};
    ChartSeries mean_series{"mean", {}, {}};
    for (const CurveRow& r : curve) {
      median_series.xs.push_back(r.x);
      median_series.ys.push_back(r.median);
      mean_series.xs.push_back(r.x);
      mean_series.ys.push_back(r.mean);
    }
    const ChartSeries chart[] = {median_series, mean_series};
    const std::string svg_path = base.output + "_curve.svg";
    write_line_chart_svg(svg_path, chart,
                         {"cumulative errors vs " + axis, axis, "cumulative errors", log_log});
    log << "chart written to " << svg_path << "\n";

    // Slope of the fitted line; on log-log axes this is the growth exponent.
    std::vector<double> xs, ys;
    for (const CurveRow& r : curve) {
      if (log_log) {
        if (r.x <= 0.0 || r.median <= 0.0) continue;
        xs.push_back(std::log(r.x));
        ys.push_back(std::log(r.median));
      } else {
        xs.push_back(r.x);
        ys.push_back(r.median);
      }
    }
    const double slope = least_squares_slope(xs, ys);
    log << (log_log ? "log-log slope of median: " : "linear slope of median: ")
        << format_double(slope) << "\n";
    return exit_code::kOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRuntime;
  }
}

int cmd_gap(const std::string& config_path, const std::string& divergence,
            std::ostream& log) {
  try {
    DivergenceKind d;
    if (divergence == "l2")
      d = DivergenceKind::L2Sq;
    else if (divergence == "hellinger")
      d = DivergenceKind::HellingerSq;
    else if (divergence == "tv")
      d = DivergenceKind::TV;
    else
      throw ConfigError("divergence", "expected l2, hellinger or tv");

    const ExperimentConfig cfg = parse_config_file(config_path);
    const ProblemParts parts = assemble_problem(cfg);
    std::vector<std::size_t> features;
    const std::size_t slots = parts.kernel->feature_invariant()
                                  ? 1
                                  : std::min(parts.kernel->feature_slots(),
                                             parts.hclass->num_features());
    for (std::size_t x = 0; x < slots; ++x) features.push_back(x);

    const MinGapReport min_gap = min_pairwise_gap(*parts.kernel, features, d);
    log << "kernel: " << parts.kernel->name() << "\n"
        << "divergence: " << divergence_label(d) << "\n"
        << "minimum pairwise gap: " << format_double(min_gap.report.value) << "\n"
        << "attained at feature " << min_gap.feature << ", labels " << min_gap.label_a
        << " vs " << min_gap.label_b << "\n"
        << "closest laws: " << print_distribution(min_gap.report.argmin_a) << " and "
        << print_distribution(min_gap.report.argmin_b) << "\n"
        << "solver iterations: " << min_gap.report.iterations
        << (min_gap.report.converged ? "" : "  (NOT converged)") << "\n";
    if (!min_gap.report.converged) return exit_code::kRuntime;
    return exit_code::kOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRuntime;
  }
}

int cmd_test_pair(const std::string& config_path, const CommonOverrides& overrides,
                  std::ostream& log) {
  try {
    ExperimentConfig cfg = parse_config_file(config_path);
    if (overrides.seed0) cfg.seed0 = *overrides.seed0;
    const ProblemParts parts = assemble_problem(cfg);
    const HypothesisClass& hc = *parts.hclass;
    if (hc.size() < 2) throw ConfigError("hypothesis_class", "need at least two hypotheses");

    const PairAnchorCache anchors(*parts.kernel, hc.num_features());

    // Feed the tester only rounds where hypotheses 0 and 1 disagree, cycling
    // through their disagreement features for up to `horizon` steps.
    std::vector<std::size_t> split_features;
    for (std::size_t x = 0; x < hc.num_features(); ++x)
      if (hc.label(0, x) != hc.label(1, x)) split_features.push_back(x);
    if (split_features.empty())
      throw ConfigError("hypothesis_class", "hypotheses 0 and 1 never disagree");

    std::vector<std::size_t> disagree_features;
    std::vector<double> schedule;
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
      const std::size_t x = split_features[t % split_features.size()];
      const std::size_t y0 = hc.label(0, x), y1 = hc.label(1, x);
      disagree_features.push_back(x);
      schedule.push_back(anchors.at(x, std::min(y0, y1), std::max(y0, y1)).gamma);
    }

    const BudgetResult budget = disagreement_budget(schedule, cfg.delta);
    log << "kernel: " << parts.kernel->name() << "\n"
        << "disagreement steps available: " << schedule.size() << "\n";
    if (budget.feasible)
      log << "decision budget at delta=" << format_double(cfg.delta) << ": " << budget.steps
          << " steps (accumulated separation " << format_double(budget.total_gap) << ")\n";
    else
      log << "decision budget at delta=" << format_double(cfg.delta)
          << ": infeasible within the horizon; testing over all steps\n";

    const std::size_t steps = budget.feasible ? budget.steps : schedule.size();
    const WorstLawCache worst(*parts.kernel);
    std::size_t wrong = 0;
    for (std::size_t run = 0; run < cfg.runs; ++run) {
      // Alternate the true hypothesis so both error directions show up.
      const std::size_t truth = run % 2;
      Rng rng = make_rng(cfg.seed0 + run, 2);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      LeCamBirgeTester tester = LeCamBirgeTester::with_step_budget(steps);
      for (std::size_t i = 0; i < steps; ++i) {
        const std::size_t x = disagree_features[i];
        const std::size_t y0 = hc.label(0, x), y1 = hc.label(1, x);
        const PairAnchor& anchor = anchors.at(x, std::min(y0, y1), std::max(y0, y1));
        const Distribution& law = worst.at(x, hc.label(truth, x));
        const std::size_t obs = sample_index(law, unif(rng));
        if (y0 < y1)
          tester.step(anchor.low, anchor.high, anchor.gamma, obs);
        else
          tester.step(anchor.high, anchor.low, anchor.gamma, obs);
      }
      const int want = truth == 0 ? 1 : 2;
      if (tester.decision() != want) ++wrong;
    }
    const double rate = double(wrong) / double(cfg.runs);
    log << "runs: " << cfg.runs << ", wrong decisions: " << wrong << " ("
        << format_double(rate * 100.0) << "%)\n"
        << "certified error probability: " << format_double(cfg.delta * 100.0) << "%\n";
    return exit_code::kOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRuntime;
  }
}

}  // namespace nocl
