#pragma once

#include <cstddef>
#include <vector>

#include "vof/forecast/errors.hpp"

namespace vof::forecast {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias-corrected moment estimates. State is two moment vectors and
// a step counter; one instance per parameter vector it drives.
class Adam {
 public:
  explicit Adam(std::size_t n, AdamConfig config = {});

  // In-place descent step. Throws ShapeMismatch if sizes disagree with the
  // size given at construction.
  void step(std::vector<double>& params, const std::vector<double>& grad);

  long steps_taken() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace vof::forecast
