#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "nocl/commands.hpp"
#include "nocl/config.hpp"
#include "nocl/csv.hpp"
#include "nocl/meta_predictor.hpp"
#include "nocl/svg.hpp"

using namespace nocl;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "nocl_test_scratch";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path.string();
}

const char* kBasicConfig = R"({
  "kernel": {"name": "massart", "eta": 0.25},
  "hypothesis_class": {"type": "random", "k": 8, "features": 4, "labels": 2, "seed": 3},
  "predictor": {"name": "l2-reduction"},
  "adversary": {"features": {"rule": "max-disagreement"},
                "noise": {"rule": "worst"},
                "ground_truth": "uniform"},
  "T": 64,
  "runs": 12,
  "delta": 0.1,
  "seed0": 5,
  "output": "OUTPREFIX"
})";

std::string basic_config_with_output(const std::string& prefix) {
  std::string text = kBasicConfig;
  const std::string needle = "OUTPREFIX";
  text.replace(text.find(needle), needle.size(), prefix);
  return text;
}

}  // namespace

TEST_CASE("config parsing: happy path and defaults") {
  const ExperimentConfig cfg = parse_config_text(basic_config_with_output("x/y"));
  CHECK(cfg.horizon == 64);
  CHECK(cfg.runs == 12);
  CHECK(cfg.delta == doctest::Approx(0.1));
  CHECK(cfg.seed0 == 5);
  CHECK(cfg.output == "x/y");

  const ExperimentConfig defaults = parse_config_text(R"({
    "kernel": {"name": "massart", "eta": 0.1},
    "hypothesis_class": {"type": "cube", "tau": 2},
    "predictor": {"name": "l2-reduction"},
    "T": 10
  })");
  CHECK(defaults.runs == 100);
  CHECK(defaults.delta == doctest::Approx(0.05));
  CHECK(defaults.seed0 == 1);
  CHECK(defaults.output == "out/run");
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"T": 4, "predictor": {"name": "l2-reduction"},
      "kernel": {"name": "massart", "eta": 0.1, "etaa": 0.2},
      "hypothesis_class": {"type": "cube", "tau": 2}})"),
                       doctest::Contains("kernel.etaa"), ConfigError);

  CHECK_THROWS_AS(parse_config_text(R"({"T": 4})"), ConfigError);  // predictor missing
  CHECK_THROWS_AS(parse_config_text("{"), ConfigError);

  // Parse errors carry line/column positions.
  try {
    parse_config_text("{\n  \"T\": 4,,\n}");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text(R"({"T": 0, "predictor": {"name": "l2-reduction"},
      "kernel": {"name": "massart", "eta": 0.1},
      "hypothesis_class": {"type": "cube", "tau": 2}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"T": 4, "predictor": {"name": "l2-reduction"},
      "kernel": {"name": "massart", "eta": 0.7},
      "hypothesis_class": {"type": "cube", "tau": 2}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"T": 4, "predictor": {"name": "nope"},
      "kernel": {"name": "massart", "eta": 0.1},
      "hypothesis_class": {"type": "cube", "tau": 2}})"),
                  ConfigError);
  // Presets exclude explicit kernels.
  CHECK_THROWS_AS(parse_config_text(R"({"T": 4, "predictor": {"name": "l2-reduction"},
      "preset": {"name": "lower-bound", "tau": 2, "gamma_h": 0.1},
      "kernel": {"name": "massart", "eta": 0.1}})"),
                  ConfigError);
}

TEST_CASE("assembly validates cross-component constraints") {
  // Class uses labels the kernel does not provide.
  const ExperimentConfig three_labels = parse_config_text(R"({
    "kernel": {"name": "massart", "eta": 0.1},
    "hypothesis_class": {"type": "table", "labels": [[0, 1], [2, 1]]},
    "predictor": {"name": "l2-reduction"},
    "T": 8
  })");
  CHECK_THROWS_AS(assemble_experiment(three_labels), ConfigError);

  // Ground-truth index out of range.
  const ExperimentConfig bad_truth = parse_config_text(R"({
    "kernel": {"name": "massart", "eta": 0.1},
    "hypothesis_class": {"type": "cube", "tau": 2},
    "adversary": {"ground_truth": 4},
    "predictor": {"name": "l2-reduction"},
    "T": 8
  })");
  CHECK_THROWS_AS(assemble_experiment(bad_truth), ConfigError);

  // Singleton-law predictor rejects segment kernels.
  const ExperimentConfig mismatched = parse_config_text(R"({
    "kernel": {"name": "massart", "eta": 0.1},
    "hypothesis_class": {"type": "cube", "tau": 2},
    "predictor": {"name": "hellinger-singleton"},
    "T": 8
  })");
  CHECK_THROWS_AS(assemble_experiment(mismatched), ConfigError);

  // Presets assemble end to end.
  const ExperimentConfig preset = parse_config_text(R"({
    "preset": {"name": "lower-bound", "tau": 2, "gamma_h": 0.1},
    "predictor": {"name": "pairwise-meta", "tester": "lecam-birge"},
    "T": 32, "runs": 2
  })");
  const Experiment exp = assemble_experiment(preset);
  CHECK(exp.spec.hclass->size() == 4);
  CHECK(exp.spec.horizon == 32);
  CHECK(exp.spec.make_predictor != nullptr);
  CHECK(exp.spec.make_predictor()->predict(0, 0.5) <= 1);
}

TEST_CASE("meta predictor threshold comes from the separation budget") {
  const ExperimentConfig cfg = parse_config_text(R"({
    "kernel": {"name": "massart", "eta": 0.25},
    "hypothesis_class": {"type": "cube", "tau": 2},
    "predictor": {"name": "pairwise-meta", "tester": "lecam-birge", "delta": 0.1},
    "T": 500
  })");
  const Experiment exp = assemble_experiment(cfg);
  // gamma_h = 2 - sqrt(3); threshold = ceil(2 ln(4K/delta) / gamma_h) with
  // K = 4: 2 ln(160) / 0.267949 = 37.88... -> 38 disagreement steps.
  auto pred = exp.spec.make_predictor();
  auto* meta = dynamic_cast<MetaPredictor*>(pred.get());
  REQUIRE(meta != nullptr);
  CHECK(meta->threshold() == doctest::Approx(38.0));
}

TEST_CASE("summary csv round trip") {
  const std::string path = (scratch_dir() / "roundtrip_summary.csv").string();
  const std::vector<SummaryRow> rows{
      {0, 17, "l2-reduction", "massart(eta=0.25)", 64, 9, true},
      {1, 18, "l2-reduction", "massart(eta=0.25)", 64, 12, false},
  };
  write_summary_csv(path, rows);
  const std::vector<SummaryRow> back = read_summary_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].run_id == 0);
  CHECK(back[0].seed == 17);
  CHECK(back[0].predictor == "l2-reduction");
  CHECK(back[0].kernel == "massart(eta=0.25)");
  CHECK(back[0].horizon == 64);
  CHECK(back[0].cum_errors == 9);
  CHECK(back[0].guarantee_event);
  CHECK_FALSE(back[1].guarantee_event);

  // LF line endings, no CR anywhere.
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find('\r') == std::string::npos);
  CHECK(buf.str().rfind("run_id,seed,predictor,kernel,T,cum_errors,guarantee_event\n", 0) ==
        0);
}

TEST_CASE("curve csv round trip keeps full precision") {
  const std::string path = (scratch_dir() / "roundtrip_curve.csv").string();
  const std::vector<CurveRow> rows{{256.0, 3.0, 7.0, 3.1415926535897931},
                                   {512.0, 5.0, 11.0, 0.1000000000000000055511}};
  write_curve_csv(path, "T", rows);
  const std::vector<CurveRow> back = read_curve_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].mean == rows[0].mean);  // bit-exact round trip
  CHECK(back[1].mean == rows[1].mean);
  CHECK(back[1].x == 512.0);
}

TEST_CASE("svg chart writer emits a well-formed polyline") {
  const std::string path = (scratch_dir() / "chart.svg").string();
  const ChartSeries series{"median", {1.0, 2.0, 4.0}, {10.0, 5.0, 2.0}};
  const ChartSeries list[] = {series};
  write_line_chart_svg(path, list, {"t", "x", "y", true});
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string svg = buf.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("least squares slope") {
  const double xs[] = {1.0, 2.0, 3.0, 4.0};
  const double ys[] = {2.0, 4.0, 6.0, 8.0};
  CHECK(least_squares_slope(xs, ys) == doctest::Approx(2.0));
  const double flat[] = {3.0, 3.0, 3.0, 3.0};
  CHECK(least_squares_slope(xs, flat) == doctest::Approx(0.0));
}

TEST_CASE("commands: exit codes and outputs") {
  const std::string prefix = (scratch_dir() / "cmdout" / "run").string();
  const std::string config = write_scratch("cmd_config.json", basic_config_with_output(prefix));
  std::ostringstream log;

  SUBCASE("simulate writes a summary and succeeds") {
    CommonOverrides o;
    o.jobs = 2;
    CHECK(cmd_simulate(config, o, log) == exit_code::kOk);
    const auto rows = read_summary_csv(prefix + "_summary.csv");
    CHECK(rows.size() == 12);
    CHECK(log.str().find("mean cumulative errors") != std::string::npos);
  }

  SUBCASE("simulate with a seed override changes the seeds") {
    CommonOverrides o;
    o.jobs = 1;
    o.seed0 = 1000;
    CHECK(cmd_simulate(config, o, log) == exit_code::kOk);
    const auto rows = read_summary_csv(prefix + "_summary.csv");
    CHECK(rows[0].seed == 1000);
  }

  SUBCASE("bad config exits with the validation code") {
    const std::string bad = write_scratch("cmd_bad.json", "{\"T\": 4}");
    CHECK(cmd_simulate(bad, {}, log) == exit_code::kValidation);
    CHECK(cmd_simulate("/nonexistent/config.json", {}, log) == exit_code::kValidation);
  }

  SUBCASE("unwritable output exits with the runtime code") {
    const std::string cfg =
        write_scratch("cmd_unwritable.json",
                      basic_config_with_output("/proc/definitely/not/writable/x"));
    CHECK(cmd_simulate(cfg, {}, log) == exit_code::kRuntime);
  }

  SUBCASE("verify runs a fast suite and reports per-property lines") {
    CHECK(cmd_verify("ewa", 2026, log) == exit_code::kOk);
    CHECK(log.str().find("[PASS]") != std::string::npos);
    CHECK(cmd_verify("not-a-suite", 2026, log) == exit_code::kValidation);
  }

  SUBCASE("gap prints the minimum separation") {
    CHECK(cmd_gap(config, "hellinger", log) == exit_code::kOk);
    CHECK(log.str().find("minimum pairwise gap") != std::string::npos);
    CHECK(cmd_gap(config, "nonsense", log) == exit_code::kValidation);
  }

  SUBCASE("test-pair reports an error rate") {
    CHECK(cmd_test_pair(config, {}, log) == exit_code::kOk);
    CHECK(log.str().find("wrong decisions") != std::string::npos);
  }

  SUBCASE("sweep writes curve files") {
    CommonOverrides o;
    o.jobs = 2;
    CHECK(cmd_sweep(config, "T", {16, 32, 64}, o, log) == exit_code::kOk);
    const auto curve = read_curve_csv(prefix + "_curve.csv");
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].x == 16.0);
    CHECK(std::filesystem::exists(prefix + "_curve.svg"));
    CHECK(log.str().find("log-log slope") != std::string::npos);
    CHECK(cmd_sweep(config, "Z", {1, 2}, o, log) == exit_code::kValidation);
  }
}
