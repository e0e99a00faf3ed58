#pragma once

#include <stdexcept>

namespace vof::forecast {

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidQuantile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// nu_plus == nu_minus leaves the critical fractile undefined.
struct DegeneratePrices : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vof::forecast
