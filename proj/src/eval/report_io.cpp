#include "vof/eval/report_io.hpp"

#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "vof/train/run_dir.hpp"

namespace vof::eval {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_aggregates(const EvaluationReport& report) {
  ordered_json j;
  j["rmse"] = report.rmse;
  j["avg_cost"] = report.avg_cost;
  j["avg_da_cost"] = report.avg_da_cost;
  j["avg_rt_cost"] = report.avg_rt_cost;
  j["hours"] = report.hours.size();
  if (report.uc_nodes > 0) {
    j["uc_nodes"] = report.uc_nodes;
    j["uc_budget_exhausted"] = report.uc_budget_exhausted;
    j["uc_worst_gap"] = report.uc_worst_gap;
  }
  return j;
}

}  // namespace

std::string hourly_csv(const EvaluationReport& report) {
  std::string out = "day,hour,y,y_tilde,lambda,nu,da_cost,rt_cost\n";
  char row[256];
  for (const HourRecord& h : report.hours) {
    std::snprintf(row, sizeof(row),
                  "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", h.day,
                  h.hour, h.actual, h.forecast, h.lambda, h.nu, h.da_cost,
                  h.rt_cost);
    out += row;
  }
  return out;
}

std::string metrics_json(const std::vector<ApproachResult>& results) {
  ordered_json j;
  j["approaches"] = ordered_json::array();
  for (const ApproachResult& r : results) {
    ordered_json entry;
    entry["name"] = r.name;
    entry["metrics"] = report_aggregates(r.report);
    j["approaches"].push_back(entry);
  }
  return j.dump(2) + "\n";
}

std::string timings_json(const std::vector<ApproachResult>& results) {
  ordered_json j;
  for (const ApproachResult& r : results) {
    ordered_json entry;
    entry["train_seconds"] = r.train_seconds;
    entry["eval_seconds"] = r.report.wall_seconds;
    j[r.name] = entry;
  }
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "capacity,approach,avg_cost,rmse\n";
  char row[160];
  for (const SweepRow& r : rows) {
    std::snprintf(row, sizeof(row), "%.17g,%s,%.17g,%.17g\n", r.capacity,
                  r.approach.c_str(), r.avg_cost, r.rmse);
    out += row;
  }
  return out;
}

void write_comparison(const std::vector<ApproachResult>& results,
                      const std::string& dir) {
  std::filesystem::create_directories(dir);
  train::write_file_atomic(dir + "/metrics.json", metrics_json(results));
  train::write_file_atomic(dir + "/timings.json", timings_json(results));
  for (const ApproachResult& r : results) {
    train::write_file_atomic(dir + "/hourly_" + r.name + ".csv",
                             hourly_csv(r.report));
  }
}

}  // namespace vof::eval
