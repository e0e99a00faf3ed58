#include "vof/eval/experiments.hpp"

#include <algorithm>
#include <chrono>

#include "vof/forecast/losses.hpp"

namespace vof::eval {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  return v[mid];
}

Matrix actuals_matrix(const data::SampleSet& test, std::size_t horizon) {
  const std::size_t n_days = test.days(horizon);
  Matrix m(n_days, horizon);
  for (std::size_t d = 0; d < n_days; ++d) {
    for (std::size_t t = 0; t < horizon; ++t) {
      m(d, t) = test.records[d * horizon + t].wind_kw;
    }
  }
  return m;
}

// Trains with the given config and evaluates on the test set, timing the
// training part separately from the report's own wall clock.
ApproachResult trained_approach(const std::string& name,
                                const data::SampleSet& train,
                                const data::SampleSet& test,
                                const market::MarketSpec& spec,
                                const train::TrainingConfig& config) {
  const auto tic = Clock::now();
  const train::TrainResult trained =
      config.loss == train::LossKind::Value
          ? train::train_value_oriented(train, spec, config)
          : train::train_quality(train, config);
  ApproachResult result;
  result.name = name;
  result.train_seconds =
      std::chrono::duration<double>(Clock::now() - tic).count();
  result.report =
      simulate_operation(trained.model, trained.scaler, test, spec);
  return result;
}

}  // namespace

double nominal_quantile(const market::MarketSpec& spec,
                        const data::SampleSet& train) {
  if (train.empty()) throw data::EmptyTrainSet("nominal quantile: no data");
  spec.validate();
  std::vector<double> loads, winds;
  loads.reserve(train.size());
  winds.reserve(train.size());
  for (const data::Record& r : train.records) {
    loads.push_back(r.load_kw);
    winds.push_back(r.wind_kw);
  }
  const double residual = median(loads) - median(winds);

  // Marginal generator at that residual, cheapest capacity first.
  std::vector<std::size_t> order(spec.n_gen());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spec.gen_costs[a] < spec.gen_costs[b];
  });
  double lambda = spec.gen_costs[order.back()];
  double served = 0.0;
  for (std::size_t g : order) {
    served += spec.gen_caps[g];
    if (served >= residual) {
      lambda = spec.gen_costs[g];
      break;
    }
  }

  const double nu_plus =
      *std::min_element(spec.up_costs.begin(), spec.up_costs.end());
  const double nu_minus =
      *std::max_element(spec.down_costs.begin(), spec.down_costs.end());
  return forecast::nominal_level(lambda, nu_plus, nu_minus);
}

std::vector<ApproachResult> run_comparison(const data::SampleSet& train,
                                           const data::SampleSet& test,
                                           const market::MarketSpec& spec,
                                           const CompareConfig& config) {
  std::vector<ApproachResult> results;

  ApproachResult perfect;
  perfect.name = "per-f";
  perfect.report = simulate_operation(actuals_matrix(test, spec.horizon),
                                      test, spec);
  results.push_back(std::move(perfect));

  train::TrainingConfig cfg = config.training;
  cfg.loss = train::LossKind::Value;
  results.push_back(trained_approach("proposed", train, test, spec, cfg));

  cfg = config.training;
  cfg.loss = train::LossKind::Value;
  cfg.model.arch = forecast::Architecture::Linear;
  results.push_back(
      trained_approach("linear-ablation", train, test, spec, cfg));

  cfg = config.training;
  cfg.loss = train::LossKind::Mse;
  results.push_back(trained_approach("qua-e", train, test, spec, cfg));

  cfg = config.training;
  cfg.loss = train::LossKind::Pinball;
  cfg.quantile = nominal_quantile(spec, train);
  results.push_back(trained_approach("qua-q", train, test, spec, cfg));

  if (config.include_sto_opt) {
    ApproachResult sto;
    sto.name = "sto-opt";
    sto.report = evaluate_sto_opt(test, train, spec, config.knn_k,
                                  config.scenarios, config.training.seed);
    results.push_back(std::move(sto));
  }
  return results;
}

std::vector<SweepRow> capacity_sweep(const data::SampleSet& dataset,
                                     const market::MarketSpec& spec,
                                     const std::vector<double>& capacities,
                                     const SweepConfig& config) {
  if (dataset.wind_cap <= 0.0) {
    throw data::TooSmall("sweep: dataset has no wind capacity to rescale");
  }
  std::vector<SweepRow> rows;
  for (double capacity : capacities) {
    if (capacity < 0.0) {
      throw data::TooSmall("sweep: negative capacity");
    }
    data::SampleSet scaled = dataset;
    if (capacity == 0.0) {
      for (data::Record& r : scaled.records) r.wind_kw = 0.0;
      scaled.wind_cap = 0.0;
      scaled.wind_multiplier = 0.0;
    } else {
      data::scale_wind(scaled, capacity / dataset.wind_cap);
    }
    market::MarketSpec spec_c = spec;
    spec_c.wind_cap = capacity;
    auto [train_c, test_c] =
        data::split(scaled, config.split_frac, spec.horizon);

    auto push = [&](const std::string& name, const EvaluationReport& report) {
      rows.push_back({capacity, name, report.avg_cost, report.rmse});
    };
    if (capacity == 0.0) {
      const EvaluationReport zero = simulate_operation(
          Matrix(test_c.days(spec.horizon), spec.horizon), test_c, spec_c);
      push("per-f", zero);
      push("proposed", zero);
      push("qua-e", zero);
      continue;
    }
    push("per-f", simulate_operation(actuals_matrix(test_c, spec.horizon),
                                     test_c, spec_c));
    train::TrainingConfig cfg = config.training;
    cfg.loss = train::LossKind::Value;
    push("proposed",
         trained_approach("proposed", train_c, test_c, spec_c, cfg).report);
    cfg = config.training;
    cfg.loss = train::LossKind::Mse;
    push("qua-e",
         trained_approach("qua-e", train_c, test_c, spec_c, cfg).report);
  }
  return rows;
}

}  // namespace vof::eval
