#pragma once

#include <string>
#include <vector>

#include "vof/eval/experiments.hpp"

namespace vof::eval {

// Per-hour records as CSV: day,hour,y,y_tilde,lambda,nu,da_cost,rt_cost.
std::string hourly_csv(const EvaluationReport& report);

// Aggregate metrics for a set of approaches as a JSON document. Wall-clock
// and training times are deliberately excluded so that repeated runs with
// the same seed produce byte-identical output; timings_json carries them.
std::string metrics_json(const std::vector<ApproachResult>& results);
std::string timings_json(const std::vector<ApproachResult>& results);

// Capacity sweep table as CSV: capacity,approach,avg_cost,rmse.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Writes metrics.json, timings.json, and hourly_<name>.csv per approach into
// `dir` (created if needed), each file atomically.
void write_comparison(const std::vector<ApproachResult>& results,
                      const std::string& dir);

}  // namespace vof::eval
