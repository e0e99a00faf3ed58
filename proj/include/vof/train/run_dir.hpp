#pragma once

#include <string>

#include "vof/train/trainer.hpp"

namespace vof::train {

// Persists a training run into a directory: a snapshot of the resolved
// configuration, trace.csv with one row per epoch, periodic checkpoints, and
// the final model. Files are written atomically (temp file, then rename).
class RunWriter : public TrainObserver {
 public:
  // Creates `dir` (and parents). checkpoint_every == 0 disables periodic
  // checkpoints; the final model is always written by finish().
  RunWriter(std::string dir, int checkpoint_every);

  void write_config_snapshot(const std::string& text);
  void on_epoch(int epoch, const EpochStats& stats,
                const forecast::ForecastModel& model,
                const FeatureScaler& scaler) override;
  // Writes trace.csv and model.ckpt; call once after training returns.
  void finish(const forecast::ForecastModel& model,
              const FeatureScaler& scaler);

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  int checkpoint_every_;
  std::string trace_;  // buffered rows; written as one atomic file
};

// Writes `content` to `path` via a temporary file in the same directory and
// an atomic rename, so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace vof::train
