// Command line front end: simulate / verify / sweep / gap / test-pair.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nocl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adversarially noised online classification lab"};
  app.require_subcommand(1);

  std::string config_path;
  nocl::CommonOverrides overrides;

  auto wire_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--jobs", overrides.jobs, "worker threads (0 = all cores)");
    sub->add_option_function<std::uint64_t>(
        "--seed0", [&](const std::uint64_t& v) { overrides.seed0 = v; },
        "override the base seed");
    sub->add_option_function<std::string>(
        "--out", [&](const std::string& v) { overrides.output = v; },
        "override the output prefix");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run the Monte Carlo game");
  wire_common(simulate);

  std::string suite = "all";
  std::uint64_t verify_seed = 2026;
  CLI::App* verify = app.add_subcommand("verify", "run property audits");
  verify->add_option("suite", suite, "divergences | geometry | ewa | testers | all");
  verify->add_option("--seed", verify_seed, "audit seed");

  std::string axis;
  std::vector<double> values;
  CLI::App* sweep = app.add_subcommand("sweep", "rerun the experiment along one axis");
  wire_common(sweep);
  sweep->add_option("--axis", axis, "T | eta | alpha | K")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');

  std::string divergence = "hellinger";
  CLI::App* gap = app.add_subcommand("gap", "minimum pairwise kernel separation");
  gap->add_option("--config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  gap->add_option("--divergence", divergence, "l2 | hellinger | tv");

  CLI::App* test_pair =
      app.add_subcommand("test-pair", "sequential test between hypotheses 0 and 1");
  wire_common(test_pair);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? nocl::exit_code::kOk : nocl::exit_code::kValidation;
  }

  if (simulate->parsed()) return nocl::cmd_simulate(config_path, overrides, std::cout);
  if (verify->parsed()) return nocl::cmd_verify(suite, verify_seed, std::cout);
  if (sweep->parsed()) return nocl::cmd_sweep(config_path, axis, values, overrides, std::cout);
  if (gap->parsed()) return nocl::cmd_gap(config_path, divergence, std::cout);
  if (test_pair->parsed()) return nocl::cmd_test_pair(config_path, overrides, std::cout);
  return nocl::exit_code::kValidation;
}
