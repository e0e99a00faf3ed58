#include "vof/train/trainer.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "vof/forecast/adam.hpp"
#include "vof/forecast/losses.hpp"
#include "vof/lp/simplex.hpp"
#include "vof/market/dispatch.hpp"
#include "vof/market/unit_commitment.hpp"

namespace vof::train {

namespace {

constexpr double kAuditTol = 1e-9;
// Offset between the weight-init stream and the batch-sampling stream, so
// the two cannot collide for any seed.
constexpr std::uint64_t kBatchStream = 0xda3e39cb94b95bdbULL;

struct Prepared {
  std::vector<std::array<double, 4>> feats;  // standardized
  std::vector<double> wind;
  std::vector<double> load;
  std::size_t n_days = 0;
  std::size_t horizon = 0;
  FeatureScaler scaler;
};

Prepared prepare(const data::SampleSet& set, std::size_t horizon) {
  if (set.empty()) throw data::EmptyTrainSet("train: dataset is empty");
  Prepared p;
  p.horizon = horizon;
  p.n_days = set.days(horizon);
  p.scaler = data::effective_scaler(set);
  p.feats.reserve(set.size());
  p.wind.reserve(set.size());
  p.load.reserve(set.size());
  for (const data::Record& r : set.records) {
    p.feats.push_back(data::standardized(r, p.scaler));
    p.wind.push_back(r.wind_kw);
    p.load.push_back(r.load_kw);
  }
  return p;
}

void check_config(const TrainingConfig& config, bool quality) {
  if (config.epochs < 0) {
    throw lp::MalformedProblem("train: negative epoch count");
  }
  if (config.batch_days < 1 || config.steps_per_epoch < 1) {
    throw lp::MalformedProblem("train: batch_days and steps_per_epoch must be "
                               "at least 1");
  }
  if (!(config.lr > 0.0)) {
    throw lp::MalformedProblem("train: learning rate must be positive");
  }
  if (config.early_stop_window < 1) {
    throw lp::MalformedProblem("train: early_stop_window must be at least 1");
  }
  if (quality) {
    if (config.loss == LossKind::Value) {
      throw lp::MalformedProblem(
          "train: value loss needs the market in the loop; use "
          "train_value_oriented");
    }
    if (config.loss == LossKind::Pinball &&
        !(config.quantile > 0.0 && config.quantile < 1.0)) {
      throw forecast::InvalidQuantile("train: quantile outside (0, 1)");
    }
  } else if (config.loss != LossKind::Value) {
    throw lp::MalformedProblem(
        "train: train_value_oriented only trains the value loss");
  }
}

std::vector<std::size_t> pick_batch(std::size_t n_days, int batch_days,
                                    Rng& rng) {
  std::vector<std::size_t> batch;
  if (static_cast<std::size_t>(batch_days) >= n_days) {
    batch.resize(n_days);
    for (std::size_t d = 0; d < n_days; ++d) batch[d] = d;
  } else {
    batch.resize(static_cast<std::size_t>(batch_days));
    for (std::size_t& d : batch) d = rng.uniform_int(n_days);
  }
  return batch;
}

bool window_is_flat(const TrainingTrace& trace, const TrainingConfig& config) {
  const std::size_t window = static_cast<std::size_t>(config.early_stop_window);
  if (trace.epochs.size() < window) return false;
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = trace.epochs.size() - window; i < trace.epochs.size();
       ++i) {
    lo = std::min(lo, trace.epochs[i].mean_loss);
    hi = std::max(hi, trace.epochs[i].mean_loss);
  }
  return hi - lo < config.early_stop_delta;
}

forecast::ModelConfig resolve_model_config(const TrainingConfig& config,
                                           double wind_cap) {
  forecast::ModelConfig mc = config.model;
  mc.input_dim = 4;
  mc.output_cap = wind_cap;
  return mc;
}

}  // namespace

CapacityAuditReport capacity_audit(const data::SampleSet& set,
                                   const market::MarketSpec& spec) {
  spec.validate();
  CapacityAuditReport report;
  const double up_total = spec.total_up_cap();
  const double down_total = spec.total_down_cap();
  const double gen_total = spec.total_gen_cap();
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    const data::Record& r = set.records[i];
    CapacityViolation v;
    v.record = i;
    // Worst under-delivery: full-capacity forecast against this realization.
    v.up_shortfall = (set.wind_cap - r.wind_kw) - up_total;
    // Worst over-delivery: zero forecast against this realization.
    v.down_shortfall = r.wind_kw - down_total;
    // Day-ahead screens at the two forecast extremes.
    v.gen_shortfall = r.load_kw - gen_total;
    v.wind_excess = set.wind_cap - r.load_kw;
    if (v.up_shortfall > kAuditTol || v.down_shortfall > kAuditTol ||
        v.gen_shortfall > kAuditTol || v.wind_excess > kAuditTol) {
      report.violations.push_back(v);
    }
  }
  return report;
}

TrainResult train_value_oriented(const data::SampleSet& train,
                                 const market::MarketSpec& spec,
                                 const TrainingConfig& config,
                                 TrainObserver* observer) {
  check_config(config, /*quality=*/false);
  spec.validate();
  if (config.day_ahead == DayAheadForm::RelaxedUc &&
      spec.commit_costs.empty()) {
    throw lp::MalformedProblem(
        "train: relaxed commitment pricing needs commitment costs");
  }
  const CapacityAuditReport audit = capacity_audit(train, spec);
  if (!audit.ok()) {
    throw CapacityAuditFailed(
        "train: " + std::to_string(audit.violations.size()) +
        " hours where worst-case forecast error exceeds flexible capacity "
        "(first at record " +
        std::to_string(audit.violations.front().record) + ")");
  }

  Prepared p = prepare(train, spec.horizon);
  const std::size_t T = p.horizon;
  forecast::ForecastModel model(resolve_model_config(config, train.wind_cap),
                                config.seed);
  forecast::Adam adam(model.param_count(), {.lr = config.lr});
  Rng batch_rng(config.seed ^ kBatchStream);

  TrainingTrace trace;
  std::vector<double> grad(model.param_count(), 0.0);
  std::vector<double> y_tilde(T, 0.0), lambda(T, 0.0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto tic = std::chrono::steady_clock::now();
    double loss_acc = 0.0, lam_acc = 0.0, nu_acc = 0.0;
    std::size_t samples = 0;
    for (int step = 0; step < config.steps_per_epoch; ++step) {
      const std::vector<std::size_t> batch =
          pick_batch(p.n_days, config.batch_days, batch_rng);
      const double scale =
          1.0 / (static_cast<double>(batch.size()) * static_cast<double>(T));
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t d : batch) {
        const std::size_t base = d * T;
        for (std::size_t t = 0; t < T; ++t) {
          y_tilde[t] = model.predict(p.feats[base + t]);
        }
        const std::vector<double> day_load(p.load.begin() + base,
                                           p.load.begin() + base + T);
        if (config.day_ahead == DayAheadForm::Dispatch) {
          market::DayAheadResult da =
              market::solve_day_ahead(spec, y_tilde, day_load);
          lambda = da.lambda;
        } else {
          lp::LinearProgram relaxed =
              market::build_relaxed_uc(spec, y_tilde, day_load);
          lp::LpSolution sol = lp::solve_lp(relaxed);
          if (sol.status != lp::SolveStatus::Optimal) {
            throw market::InfeasibleByConstruction(
                "train: relaxed commitment stage infeasible");
          }
          for (std::size_t t = 0; t < T; ++t) lambda[t] = sol.eq_duals[t];
        }
        for (std::size_t t = 0; t < T; ++t) {
          market::RealTimeResult rt =
              market::solve_real_time(spec, y_tilde[t], p.wind[base + t]);
          loss_acc += forecast::value_loss(y_tilde[t], p.wind[base + t],
                                           lambda[t], rt.nu);
          lam_acc += lambda[t];
          nu_acc += rt.nu;
          ++samples;
          model.accumulate_gradient(
              p.feats[base + t],
              forecast::value_loss_grad(lambda[t], rt.nu) * scale, grad);
        }
      }
      adam.step(model.params(), grad);
    }
    EpochStats stats;
    const double n = static_cast<double>(samples);
    stats.mean_loss = loss_acc / n;
    stats.mean_lambda = lam_acc / n;
    stats.mean_nu = nu_acc / n;
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count();
    trace.epochs.push_back(stats);
    if (observer) observer->on_epoch(epoch, stats, model, p.scaler);
    if (window_is_flat(trace, config)) {
      trace.early_stopped = true;
      break;
    }
  }
  return {std::move(model), std::move(p.scaler), std::move(trace)};
}

TrainResult train_quality(const data::SampleSet& train,
                          const TrainingConfig& config,
                          TrainObserver* observer) {
  check_config(config, /*quality=*/true);
  Prepared p = prepare(train, /*horizon=*/1);
  forecast::ForecastModel model(resolve_model_config(config, train.wind_cap),
                                config.seed);
  forecast::Adam adam(model.param_count(), {.lr = config.lr});
  Rng batch_rng(config.seed ^ kBatchStream);

  TrainingTrace trace;
  std::vector<double> grad(model.param_count(), 0.0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto tic = std::chrono::steady_clock::now();
    double loss_acc = 0.0;
    std::size_t samples = 0;
    for (int step = 0; step < config.steps_per_epoch; ++step) {
      // Quality losses decouple across hours, so a "day" is one record here
      // and batch_days counts records.
      const std::vector<std::size_t> batch =
          pick_batch(p.n_days, config.batch_days, batch_rng);
      const double scale = 1.0 / static_cast<double>(batch.size());
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i : batch) {
        const double y_hat = model.predict(p.feats[i]);
        double loss, slope;
        if (config.loss == LossKind::Mse) {
          loss = forecast::mse_loss(y_hat, p.wind[i]);
          slope = forecast::mse_grad(y_hat, p.wind[i]);
        } else {
          loss = forecast::pinball_loss(y_hat, p.wind[i], config.quantile);
          slope = forecast::pinball_grad(y_hat, p.wind[i], config.quantile);
        }
        loss_acc += loss;
        ++samples;
        model.accumulate_gradient(p.feats[i], slope * scale, grad);
      }
      adam.step(model.params(), grad);
    }
    EpochStats stats;
    stats.mean_loss = loss_acc / static_cast<double>(samples);
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count();
    trace.epochs.push_back(stats);
    if (observer) observer->on_epoch(epoch, stats, model, p.scaler);
    if (window_is_flat(trace, config)) {
      trace.early_stopped = true;
      break;
    }
  }
  return {std::move(model), std::move(p.scaler), std::move(trace)};
}

}  // namespace vof::train
