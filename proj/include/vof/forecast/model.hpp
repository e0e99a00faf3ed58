#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vof/core/scaler.hpp"
#include "vof/forecast/errors.hpp"

namespace vof::forecast {

enum class Architecture { Linear, Mlp };

struct ModelConfig {
  Architecture arch = Architecture::Mlp;
  std::size_t input_dim = 4;
  // Hidden layer widths; ignored for Linear. ReLU between hidden layers.
  std::vector<std::size_t> hidden = {256, 256};
  // Upper bound of the forecast range. The raw output is squashed through
  // cap * sigmoid(raw), which keeps forecasts inside [0, cap] for any
  // parameter vector instead of relying on clipping.
  double output_cap = 40.0;

  bool operator==(const ModelConfig&) const = default;
};

// Feed-forward point forecaster with a scaled-sigmoid output stage.
// Parameters live in one flat vector (per layer: row-major weights, then
// biases) so optimizers and checkpoints can treat the model as a single
// coordinate vector.
class ForecastModel {
 public:
  // Initializes weights and biases from U[-1/sqrt(fan_in), 1/sqrt(fan_in)],
  // drawn from a deterministic stream over `seed`.
  ForecastModel(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Forecast for one feature vector (already standardized by the caller).
  double predict(std::span<const double> s) const;

  // Adds upstream * d predict / d theta to `grad`, which must have
  // param_count() entries. Reverse-mode accumulation; recomputes the forward
  // pass internally. ReLU uses the zero subgradient at a kink.
  void accumulate_gradient(std::span<const double> s, double upstream,
                           std::vector<double>& grad) const;

  // Plain-text checkpoint with hexfloat parameters, so a reload reproduces
  // forecasts bit for bit. The feature scaler rides along because forecasts
  // are only reproducible with the exact standardization constants.
  void save(std::ostream& out, const FeatureScaler& scaler) const;
  void save_file(const std::string& path, const FeatureScaler& scaler) const;
  static std::pair<ForecastModel, FeatureScaler> load(std::istream& in);
  static std::pair<ForecastModel, FeatureScaler> load_file(
      const std::string& path);

 private:
  struct LayerView {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t w_off = 0;  // out x in row-major block
    std::size_t b_off = 0;
  };

  ForecastModel(const ModelConfig& config, std::vector<double> params);
  void build_layout();
  // Pre-activations and activations per layer; scratch owned by the caller
  // so gradient accumulation stays allocation-light in training loops.
  double forward_raw(std::span<const double> s,
                     std::vector<std::vector<double>>& pre,
                     std::vector<std::vector<double>>& act) const;

  ModelConfig config_;
  std::vector<LayerView> layers_;
  std::vector<double> params_;
};

}  // namespace vof::forecast
