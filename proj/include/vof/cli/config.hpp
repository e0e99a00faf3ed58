#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vof/data/dataset.hpp"
#include "vof/market/spec.hpp"
#include "vof/train/trainer.hpp"

namespace vof::cli {

// Any defect in an experiment config: unreadable file, unknown section or
// key, malformed value, or a referenced path that does not exist. The message
// carries the config name and 1-based line number where that makes sense.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Where the samples come from: the built-in synthetic generator, or a CSV
// file in the documented schema.
struct DataSection {
  std::string source = "synth";  // "synth" or a CSV path
  std::uint64_t seed = 1;
  std::size_t days = 365;          // synth only
  double wind_multiplier = 1.0;    // rescales the wind column and capacity
  double train_frac = 0.8;
};

struct TrainingSection {
  train::TrainingConfig core;
  int checkpoint_every = 50;  // epochs between checkpoints; 0 disables
};

struct EvaluationSection {
  std::size_t scenarios = 50;
  std::size_t knn = 50;
  std::vector<double> capacities = {20.0, 30.0, 40.0};
  bool include_sto_opt = true;
  long node_budget = 100000;
  // Replacement real-time prices for operation; empty keeps the market's.
  std::vector<double> rt_up_override;
  std::vector<double> rt_down_override;
};

// One experiment, fully specified: the market, where the data comes from, how
// to train, and what to evaluate. Defaults describe the synthetic benchmark,
// so an empty config is already runnable.
struct ExperimentConfig {
  market::MarketSpec market = market::synth_market();
  DataSection data;
  TrainingSection training;
  EvaluationSection evaluation;
};

// Parses the structured plain-text format:
//   [section]            sections: market, data, training, evaluation
//   key = value          numbers, "strings", [arrays], true/false, # comments
// Unknown sections or keys are errors (typos must not silently revert a knob
// to its default). `name` labels error messages, usually the file path.
ExperimentConfig parse_config(std::istream& in, const std::string& name);

// parse_config over a file; also verifies that a CSV data source exists.
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form; parse_config reads it back to the same config.
// Training runs store this as their config snapshot, flag overrides included.
std::string config_text(const ExperimentConfig& config);

// Materializes the config's dataset: generates the synthetic history or loads
// the CSV at the market's installed capacity, then applies the wind
// multiplier. The returned set's wind_cap is the capacity the experiment
// should dispatch against.
data::SampleSet load_samples(const ExperimentConfig& config);

}  // namespace vof::cli
