#include "vof/eval/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "vof/lp/branch_and_bound.hpp"
#include "vof/market/dispatch.hpp"
#include "vof/market/stochastic.hpp"
#include "vof/market/unit_commitment.hpp"
#include "vof/train/trainer.hpp"

namespace vof::eval {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point tic) {
  return std::chrono::duration<double>(Clock::now() - tic).count();
}

void check_alignment(const data::SampleSet& test,
                     const market::MarketSpec& spec) {
  if (test.empty()) throw data::EmptyDataset("eval: test set is empty");
  if (std::abs(test.wind_cap - spec.wind_cap) > 1e-9) {
    throw lp::MalformedProblem(
        "eval: dataset capacity " + std::to_string(test.wind_cap) +
        " does not match market capacity " + std::to_string(spec.wind_cap));
  }
  test.days(spec.horizon);  // throws GridMismatch on ragged sets
}

void check_forecast_shape(const Matrix& forecasts, std::size_t n_days,
                          std::size_t horizon) {
  if (forecasts.rows() != n_days || forecasts.cols() != horizon) {
    throw data::GridMismatch(
        "eval: forecast grid " + std::to_string(forecasts.rows()) + "x" +
        std::to_string(forecasts.cols()) + " does not match " +
        std::to_string(n_days) + " days of " + std::to_string(horizon) +
        " hours");
  }
}

market::RealTimeResult settle_hour(const market::MarketSpec& spec,
                                   double forecast, double actual,
                                   std::size_t day, std::size_t hour) {
  try {
    return market::solve_real_time(spec, forecast, actual);
  } catch (const market::BalancingInfeasible& e) {
    throw market::BalancingInfeasible("day " + std::to_string(day) + " hour " +
                                          std::to_string(hour) + ": " +
                                          e.what(),
                                      e.deficit);
  }
}

void finalize(EvaluationReport& report) {
  double se = 0.0, da = 0.0, rt = 0.0;
  for (const HourRecord& h : report.hours) {
    const double err = h.forecast - h.actual;
    se += err * err;
    da += h.da_cost;
    rt += h.rt_cost;
  }
  const double n = static_cast<double>(report.hours.size());
  report.rmse = std::sqrt(se / n);
  report.avg_da_cost = da / n;
  report.avg_rt_cost = rt / n;
  report.avg_cost = (da + rt) / n;
}

void require_audit(const data::SampleSet& test,
                   const market::MarketSpec& spec) {
  const train::CapacityAuditReport audit = train::capacity_audit(test, spec);
  if (!audit.ok()) {
    throw train::CapacityAuditFailed(
        "eval: " + std::to_string(audit.violations.size()) +
        " test hours exceed flexible capacity in the worst case (first at "
        "record " +
        std::to_string(audit.violations.front().record) + ")");
  }
}

}  // namespace

Matrix forecast_matrix(const forecast::ForecastModel& model,
                       const FeatureScaler& scaler,
                       const data::SampleSet& test, std::size_t horizon) {
  const std::size_t n_days = test.days(horizon);
  Matrix m(n_days, horizon);
  for (std::size_t d = 0; d < n_days; ++d) {
    for (std::size_t t = 0; t < horizon; ++t) {
      m(d, t) = model.predict(
          data::standardized(test.records[d * horizon + t], scaler));
    }
  }
  return m;
}

EvaluationReport simulate_operation(const Matrix& forecasts,
                                    const data::SampleSet& test,
                                    const market::MarketSpec& spec) {
  const auto tic = Clock::now();
  check_alignment(test, spec);
  const std::size_t T = spec.horizon;
  const std::size_t n_days = test.days(T);
  check_forecast_shape(forecasts, n_days, T);

  EvaluationReport report;
  std::vector<double> y_tilde(T), load(T);
  for (std::size_t d = 0; d < n_days; ++d) {
    for (std::size_t t = 0; t < T; ++t) {
      y_tilde[t] = forecasts(d, t);
      load[t] = test.records[d * T + t].load_kw;
    }
    const market::DayAheadResult da =
        market::solve_day_ahead(spec, y_tilde, load);
    for (std::size_t t = 0; t < T; ++t) {
      const double actual = test.records[d * T + t].wind_kw;
      const market::RealTimeResult rt =
          settle_hour(spec, y_tilde[t], actual, d, t);
      HourRecord h;
      h.day = d;
      h.hour = t;
      h.actual = actual;
      h.forecast = y_tilde[t];
      h.lambda = da.lambda[t];
      h.nu = rt.nu;
      for (std::size_t g = 0; g < spec.n_gen(); ++g) {
        h.da_cost += spec.gen_costs[g] * da.schedule(t, g);
      }
      h.rt_cost = rt.cost;
      report.hours.push_back(h);
    }
  }
  finalize(report);
  report.wall_seconds = seconds_since(tic);
  return report;
}

EvaluationReport simulate_operation(const forecast::ForecastModel& model,
                                    const FeatureScaler& scaler,
                                    const data::SampleSet& test,
                                    const market::MarketSpec& spec) {
  check_alignment(test, spec);
  require_audit(test, spec);
  return simulate_operation(forecast_matrix(model, scaler, test, spec.horizon),
                            test, spec);
}

EvaluationReport evaluate_sto_opt(const data::SampleSet& test,
                                  const data::SampleSet& train,
                                  const market::MarketSpec& spec,
                                  std::size_t k, std::size_t n_scenarios,
                                  std::uint64_t seed) {
  const auto tic = Clock::now();
  check_alignment(test, spec);
  if (train.empty()) throw data::EmptyTrainSet("eval: training set is empty");
  if (n_scenarios == 0) throw data::TooSmall("eval: need at least 1 scenario");
  const std::size_t T = spec.horizon;
  const std::size_t n_days = test.days(T);

  Rng rng(seed);
  const std::vector<double> probs(
      n_scenarios, 1.0 / static_cast<double>(n_scenarios));
  EvaluationReport report;
  std::vector<double> load(T);
  for (std::size_t d = 0; d < n_days; ++d) {
    Matrix scenarios(n_scenarios, T);
    for (std::size_t t = 0; t < T; ++t) {
      load[t] = test.records[d * T + t].load_kw;
      const std::vector<double> draws = data::knn_scenarios(
          train, test.records[d * T + t].features(), k, n_scenarios, rng);
      for (std::size_t s = 0; s < n_scenarios; ++s) scenarios(s, t) = draws[s];
    }
    const market::StochasticResult sol =
        market::solve_stochastic(spec, load, scenarios, probs);
    for (std::size_t t = 0; t < T; ++t) {
      const double actual = test.records[d * T + t].wind_kw;
      const market::RealTimeResult rt =
          settle_hour(spec, sol.y_tilde[t], actual, d, t);
      HourRecord h;
      h.day = d;
      h.hour = t;
      h.actual = actual;
      h.forecast = sol.y_tilde[t];
      h.lambda = sol.lambda[t];
      h.nu = rt.nu;
      for (std::size_t g = 0; g < spec.n_gen(); ++g) {
        h.da_cost += spec.gen_costs[g] * sol.schedule(t, g);
      }
      h.rt_cost = rt.cost;
      report.hours.push_back(h);
    }
  }
  finalize(report);
  report.wall_seconds = seconds_since(tic);
  return report;
}

std::vector<DualGapBin> cost_reduction_by_dual_gap(
    const EvaluationReport& proposed, const EvaluationReport& baseline,
    std::size_t bins) {
  if (bins == 0) {
    throw lp::MalformedProblem("dual gap: need at least one bin");
  }
  if (proposed.hours.size() != baseline.hours.size()) {
    throw data::GridMismatch("dual gap: reports cover different hour counts");
  }
  const std::size_t n = proposed.hours.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (proposed.hours[i].day != baseline.hours[i].day ||
        proposed.hours[i].hour != baseline.hours[i].hour) {
      throw data::GridMismatch("dual gap: reports cover different (day, hour) "
                               "grids");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto gap = [&](std::size_t i) {
    return proposed.hours[i].lambda - proposed.hours[i].nu;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ga = gap(a), gb = gap(b);
    return ga != gb ? ga < gb : a < b;
  });

  std::vector<DualGapBin> out(bins);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t i = order[rank];
    DualGapBin& bin = out[rank * bins / n];
    if (bin.hours == 0) {
      bin.gap_lo = gap(i);
      bin.gap_hi = gap(i);
    } else {
      bin.gap_lo = std::min(bin.gap_lo, gap(i));
      bin.gap_hi = std::max(bin.gap_hi, gap(i));
    }
    const double reduction =
        (baseline.hours[i].da_cost + baseline.hours[i].rt_cost) -
        (proposed.hours[i].da_cost + proposed.hours[i].rt_cost);
    bin.mean_reduction += reduction;
    ++bin.hours;
  }
  for (DualGapBin& bin : out) {
    if (bin.hours > 0) bin.mean_reduction /= static_cast<double>(bin.hours);
  }
  return out;
}

EvaluationReport evaluate_uc(const Matrix& forecasts,
                             const data::SampleSet& test,
                             const market::MarketSpec& spec,
                             long node_budget) {
  const auto tic = Clock::now();
  check_alignment(test, spec);
  const std::size_t T = spec.horizon;
  const std::size_t G = spec.n_gen();
  const std::size_t n_days = test.days(T);
  check_forecast_shape(forecasts, n_days, T);

  EvaluationReport report;
  lp::BnbOptions opts;
  opts.node_budget = node_budget;
  std::vector<double> y_tilde(T), load(T);
  for (std::size_t d = 0; d < n_days; ++d) {
    for (std::size_t t = 0; t < T; ++t) {
      y_tilde[t] = forecasts(d, t);
      load[t] = test.records[d * T + t].load_kw;
    }
    const market::UcProblem uc = market::build_uc(spec, y_tilde, load);
    const lp::MilpSolution sol = lp::solve_milp(uc.lp, uc.binaries, opts);
    report.uc_nodes += sol.nodes;
    if (sol.status != lp::SolveStatus::Optimal) {
      if (sol.budget_exhausted) {
        throw NodeBudgetExceeded("uc: day " + std::to_string(d) +
                                 " exhausted the node budget with no "
                                 "incumbent schedule");
      }
      throw market::InfeasibleByConstruction(
          "uc: day " + std::to_string(d) + " has no feasible commitment");
    }
    report.uc_budget_exhausted |= sol.budget_exhausted;
    report.uc_worst_gap = std::max(report.uc_worst_gap, sol.gap);
    for (std::size_t t = 0; t < T; ++t) {
      const double actual = test.records[d * T + t].wind_kw;
      const market::RealTimeResult rt =
          settle_hour(spec, y_tilde[t], actual, d, t);
      HourRecord h;
      h.day = d;
      h.hour = t;
      h.actual = actual;
      h.forecast = y_tilde[t];
      h.lambda = sol.incumbent.eq_duals[t];
      h.nu = rt.nu;
      for (std::size_t g = 0; g < G; ++g) {
        h.da_cost += spec.gen_costs[g] * sol.incumbent.x[uc.x_offset + t * G + g];
        h.da_cost +=
            spec.commit_costs[g] * sol.incumbent.x[uc.u_offset + t * G + g];
      }
      h.rt_cost = rt.cost;
      report.hours.push_back(h);
    }
  }
  finalize(report);
  report.wall_seconds = seconds_since(tic);
  return report;
}

EvaluationReport evaluate_uc(const forecast::ForecastModel& model,
                             const FeatureScaler& scaler,
                             const data::SampleSet& test,
                             const market::MarketSpec& spec,
                             long node_budget) {
  check_alignment(test, spec);
  require_audit(test, spec);
  return evaluate_uc(forecast_matrix(model, scaler, test, spec.horizon), test,
                     spec, node_budget);
}

EvaluationReport evaluate_with_override(
    const forecast::ForecastModel& model, const FeatureScaler& scaler,
    const data::SampleSet& test, const market::MarketSpec& spec,
    const RtPriceOverride& override_prices) {
  market::MarketSpec adjusted = spec;
  if (!override_prices.up_costs.empty()) {
    if (override_prices.up_costs.size() != spec.n_up()) {
      throw lp::MalformedProblem(
          "override: " + std::to_string(override_prices.up_costs.size()) +
          " up prices for " + std::to_string(spec.n_up()) + " resources");
    }
    adjusted.up_costs = override_prices.up_costs;
  }
  if (!override_prices.down_costs.empty()) {
    if (override_prices.down_costs.size() != spec.n_down()) {
      throw lp::MalformedProblem(
          "override: " + std::to_string(override_prices.down_costs.size()) +
          " down prices for " + std::to_string(spec.n_down()) + " resources");
    }
    adjusted.down_costs = override_prices.down_costs;
  }
  return simulate_operation(model, scaler, test, adjusted);
}

}  // namespace vof::eval
