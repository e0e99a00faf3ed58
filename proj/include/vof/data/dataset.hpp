#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vof/core/rng.hpp"
#include "vof/core/scaler.hpp"

namespace vof::data {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimestampOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyTrainSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyDataset : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two per-hour series disagree on their (day, hour) grid.
struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One hour of history: numeric weather forecasts available day-ahead, plus
// the realized wind power and system load.
struct Record {
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  double ws10 = 0.0;           // forecast wind speed at 10 m [m/s]
  double wd10 = 0.0;           // forecast wind direction at 10 m [deg]
  double ws100 = 0.0;          // forecast wind speed at 100 m [m/s]
  double wd100 = 0.0;          // forecast wind direction at 100 m [deg]
  double wind_kw = 0.0;        // realized wind power [kW]
  double load_kw = 0.0;        // realized load [kW]

  std::array<double, 4> features() const { return {ws10, wd10, ws100, wd100}; }
  bool operator==(const Record&) const = default;
};

struct SampleSet {
  std::vector<Record> records;
  double wind_cap = 40.0;        // installed wind capacity [kW]
  double wind_multiplier = 1.0;  // cumulative scale_wind factor
  // Standardization constants fitted on the training part of a split and
  // copied to the matching test part; empty until then.
  FeatureScaler scaler;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  // Number of whole days of length `horizon`; GridMismatch if ragged.
  std::size_t days(std::size_t horizon) const;
};

// Standardized feature vector for one record.
std::array<double, 4> standardized(const Record& r, const FeatureScaler& s);

// Enforces wind_kw in [0, wind_cap], load_kw > 0, and timestamps strictly
// increasing on an hourly grid. Throws ParseError or TimestampOrder with the
// offending record index.
void validate(const SampleSet& set);

// Mean/sd of the four features over `set` (sd floored at 1e-8).
FeatureScaler fit_scaler(const SampleSet& set);

// The set's own scaler when fitted, otherwise one fitted on the spot.
FeatureScaler effective_scaler(const SampleSet& set);

// Chronological split at a whole-day boundary. Fits the feature scaler on the
// training part and stamps it on both parts. Throws TooSmall when the
// fraction is outside (0, 1) or either part would be empty.
std::pair<SampleSet, SampleSet> split(const SampleSet& set, double frac,
                                      std::size_t horizon = 24);

// Scales realized wind power and the installed capacity, leaving weather
// features and load untouched.
void scale_wind(SampleSet& set, double factor);

// S wind-power scenario values for a query hour: the k nearest training hours
// by Euclidean distance on standardized features, sampled uniformly with
// replacement. Ties in distance break by record index so results are
// reproducible. Throws EmptyTrainSet, or TooSmall when k is 0 or exceeds the
// training size.
std::vector<double> knn_scenarios(const SampleSet& train,
                                  const std::array<double, 4>& query_raw,
                                  std::size_t k, std::size_t n_draws, Rng& rng);

}  // namespace vof::data
