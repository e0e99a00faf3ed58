#pragma once

#include <cstdint>

#include "vof/data/dataset.hpp"

namespace vof::data {

// Synthetic hourly history: a diurnal load profile between 50 and 70 kW with
// mean 56 kW, an AR(1) wind speed process at two heights driving a logistic
// power curve, and day-ahead weather features obtained by adding forecast
// noise to the realized weather. Bit-identical for a given seed. Throws
// TooSmall for zero days.
SampleSet synth_generate(std::uint64_t seed, std::size_t days,
                         double wind_cap = 40.0);

}  // namespace vof::data
