#pragma once

#include <cstddef>
#include <vector>

namespace vof {

// Per-feature affine standardization fitted on training data and applied
// verbatim everywhere else, so train/test and save/load see identical inputs.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> sd;  // floored at a small positive value when fitted

  bool empty() const { return mean.empty(); }
  std::size_t dim() const { return mean.size(); }

  double apply(std::size_t j, double raw) const {
    return (raw - mean[j]) / sd[j];
  }

  bool operator==(const FeatureScaler&) const = default;
};

}  // namespace vof
