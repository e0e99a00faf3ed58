#include "vof/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vof::data {

std::size_t SampleSet::days(std::size_t horizon) const {
  if (horizon == 0 || records.size() % horizon != 0) {
    throw GridMismatch("dataset: " + std::to_string(records.size()) +
                       " records do not form whole days of " +
                       std::to_string(horizon) + " hours");
  }
  return records.size() / horizon;
}

std::array<double, 4> standardized(const Record& r, const FeatureScaler& s) {
  const std::array<double, 4> raw = r.features();
  std::array<double, 4> out;
  for (std::size_t j = 0; j < 4; ++j) out[j] = s.apply(j, raw[j]);
  return out;
}

void validate(const SampleSet& set) {
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    const Record& r = set.records[i];
    if (!(r.wind_kw >= 0.0 && r.wind_kw <= set.wind_cap)) {
      throw ParseError("record " + std::to_string(i) + ": wind_kw " +
                       std::to_string(r.wind_kw) + " outside [0, " +
                       std::to_string(set.wind_cap) + "]");
    }
    if (!(r.load_kw > 0.0)) {
      throw ParseError("record " + std::to_string(i) +
                       ": load_kw must be positive");
    }
    if (i > 0 && r.timestamp != set.records[i - 1].timestamp + 3600) {
      throw TimestampOrder("record " + std::to_string(i) +
                           ": timestamps must advance by exactly one hour");
    }
  }
}

FeatureScaler fit_scaler(const SampleSet& set) {
  if (set.empty()) throw EmptyTrainSet("fit_scaler: no records");
  FeatureScaler s;
  s.mean.assign(4, 0.0);
  s.sd.assign(4, 0.0);
  const double n = static_cast<double>(set.size());
  for (const Record& r : set.records) {
    const auto f = r.features();
    for (std::size_t j = 0; j < 4; ++j) s.mean[j] += f[j];
  }
  for (std::size_t j = 0; j < 4; ++j) s.mean[j] /= n;
  for (const Record& r : set.records) {
    const auto f = r.features();
    for (std::size_t j = 0; j < 4; ++j) {
      const double d = f[j] - s.mean[j];
      s.sd[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    s.sd[j] = std::max(std::sqrt(s.sd[j] / n), 1e-8);
  }
  return s;
}

FeatureScaler effective_scaler(const SampleSet& set) {
  return set.scaler.empty() ? fit_scaler(set) : set.scaler;
}

std::pair<SampleSet, SampleSet> split(const SampleSet& set, double frac,
                                      std::size_t horizon) {
  if (!(frac > 0.0 && frac < 1.0)) {
    throw TooSmall("split: fraction " + std::to_string(frac) +
                   " outside (0, 1)");
  }
  const std::size_t n_days = set.days(horizon);
  const std::size_t train_days =
      static_cast<std::size_t>(std::floor(static_cast<double>(n_days) * frac));
  if (train_days == 0 || train_days == n_days) {
    throw TooSmall("split: " + std::to_string(n_days) +
                   " days cannot be split at fraction " + std::to_string(frac));
  }
  SampleSet train;
  SampleSet test;
  train.wind_cap = test.wind_cap = set.wind_cap;
  train.wind_multiplier = test.wind_multiplier = set.wind_multiplier;
  const std::size_t cut = train_days * horizon;
  train.records.assign(set.records.begin(),
                       set.records.begin() + static_cast<std::ptrdiff_t>(cut));
  test.records.assign(set.records.begin() + static_cast<std::ptrdiff_t>(cut),
                      set.records.end());
  // Standardization constants come from the training part only; the test
  // part reuses them so both sides see the same feature space.
  train.scaler = fit_scaler(train);
  test.scaler = train.scaler;
  return {std::move(train), std::move(test)};
}

void scale_wind(SampleSet& set, double factor) {
  if (!(factor > 0.0)) {
    throw TooSmall("scale_wind: factor must be positive");
  }
  for (Record& r : set.records) r.wind_kw *= factor;
  set.wind_cap *= factor;
  set.wind_multiplier *= factor;
}

std::vector<double> knn_scenarios(const SampleSet& train,
                                  const std::array<double, 4>& query_raw,
                                  std::size_t k, std::size_t n_draws,
                                  Rng& rng) {
  if (train.empty()) throw EmptyTrainSet("knn: training set is empty");
  if (k == 0 || k > train.size()) {
    throw TooSmall("knn: k = " + std::to_string(k) + " with " +
                   std::to_string(train.size()) + " training records");
  }
  const FeatureScaler scaler = effective_scaler(train);
  std::array<double, 4> q;
  for (std::size_t j = 0; j < 4; ++j) q[j] = scaler.apply(j, query_raw[j]);

  std::vector<std::pair<double, std::size_t>> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto f = standardized(train.records[i], scaler);
    double d2 = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double d = f[j] - q[j];
      d2 += d * d;
    }
    dist[i] = {d2, i};
  }
  std::nth_element(dist.begin(),
                   dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   dist.end());
  // Sort the kept prefix so equal distances resolve to the lowest index and
  // draws are reproducible across platforms.
  std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));

  std::vector<double> draws(n_draws);
  for (double& d : draws) {
    d = train.records[dist[rng.uniform_int(k)].second].wind_kw;
  }
  return draws;
}

}  // namespace vof::data
