#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vof/core/matrix.hpp"
#include "vof/data/dataset.hpp"
#include "vof/forecast/model.hpp"
#include "vof/market/spec.hpp"

namespace vof::eval {

// The commitment search ran out of nodes before finding any feasible
// schedule, so there is no incumbent to fall back on.
struct NodeBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HourRecord {
  std::size_t day = 0;
  std::size_t hour = 0;
  double actual = 0.0;    // realized wind power [kW]
  double forecast = 0.0;  // committed forecast [kW]
  double lambda = 0.0;    // day-ahead balance price [$/kW]
  double nu = 0.0;        // real-time balance price [$/kW]
  double da_cost = 0.0;   // this hour's share of the day-ahead cost [$]
  double rt_cost = 0.0;   // real-time settlement [$], negative for buy-backs
};

struct EvaluationReport {
  double rmse = 0.0;
  double avg_cost = 0.0;     // $/h over all test hours, day-ahead + real-time
  double avg_da_cost = 0.0;  // $/h
  double avg_rt_cost = 0.0;  // $/h
  std::vector<HourRecord> hours;
  double wall_seconds = 0.0;
  // Commitment-stage bookkeeping (evaluate_uc only).
  long uc_nodes = 0;
  bool uc_budget_exhausted = false;
  double uc_worst_gap = 0.0;
};

// Day-by-hour forecasts for a test set, standardized with the scaler the
// model was trained with.
Matrix forecast_matrix(const forecast::ForecastModel& model,
                       const FeatureScaler& scaler,
                       const data::SampleSet& test, std::size_t horizon);

// Runs the operational pipeline on given forecasts: one day-ahead dispatch
// per day, one real-time settlement per hour, costs and prices recorded per
// hour. Throws EmptyDataset, and BalancingInfeasible tagged with the
// offending (day, hour).
EvaluationReport simulate_operation(const Matrix& forecasts,
                                    const data::SampleSet& test,
                                    const market::MarketSpec& spec);

// Same, with forecasts produced by the model. Because the model can emit
// anything in [0, capacity], this overload first requires a passing capacity
// audit over the test range and throws CapacityAuditFailed otherwise.
EvaluationReport simulate_operation(const forecast::ForecastModel& model,
                                    const FeatureScaler& scaler,
                                    const data::SampleSet& test,
                                    const market::MarketSpec& spec);

// Scenario-based benchmark: per test day, builds S wind scenarios per hour
// from the k nearest training hours, solves the two-stage stochastic program,
// keeps its first-stage schedule and forecast, and settles the realization in
// real time. Wall-clock time covers scenario generation and the solves.
EvaluationReport evaluate_sto_opt(const data::SampleSet& test,
                                  const data::SampleSet& train,
                                  const market::MarketSpec& spec,
                                  std::size_t k, std::size_t n_scenarios,
                                  std::uint64_t seed);

struct DualGapBin {
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  double mean_reduction = 0.0;  // baseline minus proposed, $/h
  std::size_t hours = 0;
};

// Buckets test hours by empirical quantiles of the proposed report's price
// gap (lambda - nu) and averages the hourly cost reduction against the
// baseline in each bucket. Both reports must cover the same (day, hour) grid.
std::vector<DualGapBin> cost_reduction_by_dual_gap(
    const EvaluationReport& proposed, const EvaluationReport& baseline,
    std::size_t bins = 4);

// Day-ahead stage solved as the commitment problem with binary on/off
// decisions. Node-budget exhaustion is recorded in the report and evaluation
// continues with the incumbent; NodeBudgetExceeded is thrown only when a day
// has no incumbent at all.
EvaluationReport evaluate_uc(const Matrix& forecasts,
                             const data::SampleSet& test,
                             const market::MarketSpec& spec,
                             long node_budget = 100000);
EvaluationReport evaluate_uc(const forecast::ForecastModel& model,
                             const FeatureScaler& scaler,
                             const data::SampleSet& test,
                             const market::MarketSpec& spec,
                             long node_budget = 100000);

// Replacement real-time prices for operation; empty vectors keep the
// training-time prices.
struct RtPriceOverride {
  std::vector<double> up_costs;
  std::vector<double> down_costs;
};

// Operates the trained model under different real-time prices than it was
// trained against; only the settlement prices change, never the model.
EvaluationReport evaluate_with_override(const forecast::ForecastModel& model,
                                        const FeatureScaler& scaler,
                                        const data::SampleSet& test,
                                        const market::MarketSpec& spec,
                                        const RtPriceOverride& override_prices);

}  // namespace vof::eval
