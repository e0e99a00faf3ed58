#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vof/data/dataset.hpp"
#include "vof/forecast/model.hpp"
#include "vof/market/spec.hpp"

namespace vof::train {

// The dataset contains hours whose worst-case forecast error could not be
// absorbed by the flexible resources, so training would eventually hit an
// unbalanceable real-time stage. Raised before any training step runs.
struct CapacityAuditFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LossKind { Value, Mse, Pinball };

// Shape of the day-ahead stage used for pricing during value training:
// plain economic dispatch, or the LP relaxation of the commitment problem.
enum class DayAheadForm { Dispatch, RelaxedUc };

struct TrainingConfig {
  int epochs = 300;
  // Days per batch. When this reaches the dataset size the batch becomes the
  // full dataset in day order (deterministic); otherwise days are drawn
  // uniformly with replacement.
  int batch_days = 16;
  int steps_per_epoch = 1;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::Value;
  double quantile = 0.5;  // pinball only
  // Architecture choice; input_dim is forced to the four weather features and
  // output_cap to the dataset's installed capacity.
  forecast::ModelConfig model;
  DayAheadForm day_ahead = DayAheadForm::Dispatch;
  // Stop when the mean epoch loss varies by less than early_stop_delta over
  // the last early_stop_window epochs.
  double early_stop_delta = 1e-6;
  int early_stop_window = 20;
};

struct EpochStats {
  double mean_loss = 0.0;
  double mean_lambda = 0.0;  // zero for quality losses
  double mean_nu = 0.0;      // zero for quality losses
  double seconds = 0.0;
};

struct TrainingTrace {
  std::vector<EpochStats> epochs;
  bool early_stopped = false;
};

struct CapacityViolation {
  std::size_t record = 0;
  double up_shortfall = 0.0;    // worst shortage minus total up capacity
  double down_shortfall = 0.0;  // worst surplus minus total down capacity
  double gen_shortfall = 0.0;   // residual load beyond total generation
  double wind_excess = 0.0;     // forecast range beyond the hourly load
};

struct CapacityAuditReport {
  std::vector<CapacityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Screens every hour against the worst forecast the model could emit
// (anywhere in [0, cap]): the real-time stage must be able to cover a full
// under- or over-forecast and the day-ahead stage must stay feasible at both
// forecast extremes. Report-only; callers decide whether to refuse.
CapacityAuditReport capacity_audit(const data::SampleSet& set,
                                   const market::MarketSpec& spec);

// Receives training progress; see run_dir.hpp for the file-writing one.
class TrainObserver {
 public:
  virtual ~TrainObserver() = default;
  virtual void on_epoch(int epoch, const EpochStats& stats,
                        const forecast::ForecastModel& model,
                        const FeatureScaler& scaler) = 0;
};

struct TrainResult {
  forecast::ForecastModel model;
  FeatureScaler scaler;
  TrainingTrace trace;
};

// Trains the forecaster so that the dispatch value of its forecasts improves:
// each epoch re-solves the day-ahead and real-time stages at the current
// forecasts, reads off the dual prices, and descends the priced loss with the
// prices held fixed. Requires loss == Value and a passing capacity audit.
TrainResult train_value_oriented(const data::SampleSet& train,
                                 const market::MarketSpec& spec,
                                 const TrainingConfig& config,
                                 TrainObserver* observer = nullptr);

// Trains the forecaster against the realized power alone (MSE or pinball),
// with no market in the loop.
TrainResult train_quality(const data::SampleSet& train,
                          const TrainingConfig& config,
                          TrainObserver* observer = nullptr);

}  // namespace vof::train
