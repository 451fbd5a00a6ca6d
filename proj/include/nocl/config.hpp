#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nocl/game.hpp"

namespace nocl {

// Configuration problem with the offending field path attached; the CLI maps
// these to the validation exit code.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Parsed and schema-checked experiment description.  Subtrees keep their
// JSON form (types and key sets already validated) because some components
// can only be materialized once the horizon is known.
struct ExperimentConfig {
  nlohmann::json kernel;     // null when a preset supplies it
  nlohmann::json hclass;
  nlohmann::json predictor;  // always present
  nlohmann::json adversary;  // null -> preset or defaults
  nlohmann::json preset;     // null unless given
  std::size_t horizon = 0;
  std::size_t runs = 100;
  double delta = 0.05;
  std::uint64_t seed0 = 1;
  std::string output = "out/run";
};

// Strict parse: unknown keys anywhere are rejected, required fields and
// types enforced, ranges checked where they do not depend on assembly.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Kernel, class and adversary without a predictor attached; enough for the
// inspection commands.
struct ProblemParts {
  std::shared_ptr<const HypothesisClass> hclass;
  std::shared_ptr<const NoiseKernel> kernel;
  AdversaryStrategy adversary;
};

ProblemParts assemble_problem(const ExperimentConfig& config);

// A runnable experiment with all shared tables prebuilt.
struct Experiment {
  GameSpec spec;
  std::string predictor_name;
  std::string kernel_name;
  std::size_t runs = 0;
  double delta = 0.05;
  std::uint64_t seed0 = 1;
  std::string output;
};

Experiment assemble_experiment(const ExperimentConfig& config);

}  // namespace nocl
