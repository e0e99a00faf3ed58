#include "vof/data/synth.hpp"

#include <cmath>

namespace vof::data {

namespace {

constexpr double kPi = 3.14159265358979323846;
// 2024-01-01T00:00:00Z; an arbitrary but fixed series start.
constexpr std::int64_t kEpochStart = 19723LL * 86400LL;

// Diurnal shape in [0, 1] with its minimum at 03:00 and peak at 15:00.
double profile(int hour) {
  return 0.5 * (1.0 - std::cos(2.0 * kPi * (hour - 3) / 24.0));
}

// Exponent that pins the daily mean of profile^gamma at 0.3, so the load
// series averages 50 + 20 * 0.3 = 56 kW by construction.
double profile_exponent() {
  auto mean_pow = [](double g) {
    double acc = 0.0;
    for (int h = 0; h < 24; ++h) acc += std::pow(profile(h), g);
    return acc / 24.0;
  };
  double lo = 1.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_pow(mid) > 0.3) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double wrap_degrees(double d) {
  d = std::fmod(d, 360.0);
  return d < 0.0 ? d + 360.0 : d;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

SampleSet synth_generate(std::uint64_t seed, std::size_t days,
                         double wind_cap) {
  if (days == 0) throw TooSmall("synth: need at least one day");
  SampleSet set;
  set.wind_cap = wind_cap;
  set.records.reserve(days * 24);

  const double gamma = profile_exponent();
  Rng rng(seed);
  // AR(1) wind speed at hub height: mean 9 m/s, strong hourly persistence.
  double v100 = 9.0;
  double theta = rng.uniform(0.0, 360.0);

  for (std::size_t d = 0; d < days; ++d) {
    for (int h = 0; h < 24; ++h) {
      v100 = 9.0 + 0.97 * (v100 - 9.0) + 0.68 * rng.normal();
      if (v100 < 0.1) v100 = 0.1;
      double v10 = 0.75 * v100 + 0.4 * rng.normal();
      if (v10 < 0.05) v10 = 0.05;
      theta = wrap_degrees(theta + rng.normal(0.0, 10.0));

      // Logistic power curve around the AR mean, plus bounded plant noise.
      const double pc = logistic((v100 - 9.5) / 1.8);
      double wind = wind_cap * pc + rng.uniform(-0.06, 0.06) * wind_cap;
      if (wind < 0.0) wind = 0.0;
      if (wind > wind_cap) wind = wind_cap;

      const double load =
          50.0 + 20.0 * std::pow(profile(h), gamma) + rng.uniform(-0.4, 0.4);

      Record r;
      r.timestamp = kEpochStart + static_cast<std::int64_t>(d * 24 + h) * 3600;
      // Features are the realized weather seen through day-ahead forecast
      // noise; they predict wind power but never reveal it exactly.
      r.ws100 = std::max(0.0, v100 + rng.normal(0.0, 0.9));
      r.ws10 = std::max(0.0, v10 + rng.normal(0.0, 0.7));
      r.wd100 = wrap_degrees(theta + rng.normal(0.0, 15.0));
      r.wd10 = wrap_degrees(theta + rng.normal(0.0, 15.0));
      r.wind_kw = wind;
      r.load_kw = load;
      set.records.push_back(r);
    }
  }
  validate(set);
  return set;
}

}  // namespace vof::data
