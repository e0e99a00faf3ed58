#pragma once

#include <string>
#include <vector>

#include "vof/eval/evaluation.hpp"
#include "vof/train/trainer.hpp"

namespace vof::eval {

// Quantile level a fixed-quantile benchmark should target, read off the
// market the way an operator would price a typical hour: the day-ahead price
// of the marginal generator at the median residual load, between the best
// available up- and down-regulation prices. Throws DegeneratePrices or
// OutOfRange when the market gives no usable band.
double nominal_quantile(const market::MarketSpec& spec,
                        const data::SampleSet& train);

struct ApproachResult {
  std::string name;
  EvaluationReport report;
  double train_seconds = 0.0;
};

struct CompareConfig {
  train::TrainingConfig training;  // loss/architecture overridden per approach
  std::size_t knn_k = 50;
  std::size_t scenarios = 50;
  bool include_sto_opt = true;  // the stochastic benchmark dominates runtime
};

// Trains and evaluates the benchmark suite on one train/test split:
//   per-f           perfect foresight (forecasts equal realizations)
//   proposed        value-trained network
//   linear-ablation value-trained linear model
//   qua-e           accuracy-trained network (MSE)
//   qua-q           fixed-quantile network at the nominal level
//   sto-opt         scenario-based stochastic program (if enabled)
// All approaches share the configured seed and split.
std::vector<ApproachResult> run_comparison(const data::SampleSet& train,
                                           const data::SampleSet& test,
                                           const market::MarketSpec& spec,
                                           const CompareConfig& config);

struct SweepRow {
  double capacity = 0.0;
  std::string approach;
  double avg_cost = 0.0;
  double rmse = 0.0;
};

struct SweepConfig {
  train::TrainingConfig training;
  double split_frac = 0.8;
};

// Rescales the wind column to each capacity, retrains the value and MSE
// models at that capacity, and evaluates them next to perfect foresight.
// Capacity zero is the no-wind degenerate case: nothing to forecast, so all
// approaches share one zero-forecast evaluation.
std::vector<SweepRow> capacity_sweep(const data::SampleSet& dataset,
                                     const market::MarketSpec& spec,
                                     const std::vector<double>& capacities,
                                     const SweepConfig& config);

}  // namespace vof::eval
