// Command-line front end. Each subcommand reads an optional experiment
// config, applies flag overrides, runs one pipeline stage, and writes
// machine-readable outputs (CSV/JSON) atomically. Errors map to distinct
// exit codes so scripts can branch on the failure class without parsing
// stderr.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vof/cli/config.hpp"
#include "vof/data/csv.hpp"
#include "vof/lp/problem.hpp"
#include "vof/eval/experiments.hpp"
#include "vof/eval/report_io.hpp"
#include "vof/train/run_dir.hpp"

namespace {

using namespace vof;

int fail_with(int code, const char* cls, const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", cls, what);
  return code;
}

// One exit code per error class named in the module contracts.
int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const cli::ConfigError& e) {
    return fail_with(2, "ConfigError", e.what());
  } catch (const lp::MalformedProblem& e) {
    return fail_with(3, "MalformedProblem", e.what());
  } catch (const lp::NumericalFailure& e) {
    return fail_with(4, "NumericalFailure", e.what());
  } catch (const market::InfeasibleByConstruction& e) {
    return fail_with(5, "InfeasibleByConstruction", e.what());
  } catch (const market::BalancingInfeasible& e) {
    return fail_with(6, "BalancingInfeasible", e.what());
  } catch (const market::IdentityViolation& e) {
    return fail_with(7, "IdentityViolation", e.what());
  } catch (const market::ScaleExceeded& e) {
    return fail_with(8, "ScaleExceeded", e.what());
  } catch (const eval::NodeBudgetExceeded& e) {
    return fail_with(9, "NodeBudgetExceeded", e.what());
  } catch (const train::CapacityAuditFailed& e) {
    return fail_with(10, "CapacityAuditFailed", e.what());
  } catch (const data::ParseError& e) {
    return fail_with(11, "ParseError", e.what());
  } catch (const data::SchemaMismatch& e) {
    return fail_with(12, "SchemaMismatch", e.what());
  } catch (const data::TimestampOrder& e) {
    return fail_with(13, "TimestampOrder", e.what());
  } catch (const data::TooSmall& e) {
    return fail_with(14, "TooSmall", e.what());
  } catch (const data::EmptyTrainSet& e) {
    return fail_with(15, "EmptyTrainSet", e.what());
  } catch (const data::EmptyDataset& e) {
    return fail_with(16, "EmptyDataset", e.what());
  } catch (const data::GridMismatch& e) {
    return fail_with(17, "GridMismatch", e.what());
  } catch (const forecast::DimensionMismatch& e) {
    return fail_with(18, "DimensionMismatch", e.what());
  } catch (const forecast::ShapeMismatch& e) {
    return fail_with(19, "ShapeMismatch", e.what());
  } catch (const forecast::InvalidQuantile& e) {
    return fail_with(20, "InvalidQuantile", e.what());
  } catch (const forecast::DegeneratePrices& e) {
    return fail_with(21, "DegeneratePrices", e.what());
  } catch (const forecast::OutOfRange& e) {
    return fail_with(22, "OutOfRange", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail_with(23, "IoError", e.what());
  } catch (const std::exception& e) {
    return fail_with(1, "InternalError", e.what());
  }
}

cli::ExperimentConfig load_or_default(const std::string& path) {
  return path.empty() ? cli::ExperimentConfig{} : cli::load_config_file(path);
}

// "90,100" -> {90, 100}; flag-style counterpart of the config arrays.
std::vector<double> csv_list(const std::string& flag, const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string item = s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const char* begin = item.c_str();
    char* end = nullptr;
    double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw cli::ConfigError(flag + ": expected comma-separated numbers, got '" +
                             s + "'");
    }
    out.push_back(x);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw cli::ConfigError(flag + ": empty list");
  return out;
}

train::LossKind loss_from_flag(const std::string& s) {
  if (s == "value") return train::LossKind::Value;
  if (s == "mse") return train::LossKind::Mse;
  if (s == "pinball") return train::LossKind::Pinball;
  throw cli::ConfigError("--loss must be value, mse, or pinball, got '" + s +
                         "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// The market a run dispatches against: the configured spec at the dataset's
// (possibly multiplier-scaled) installed capacity.
market::MarketSpec aligned_spec(const cli::ExperimentConfig& config,
                                const data::SampleSet& set) {
  market::MarketSpec spec = config.market;
  spec.wind_cap = set.wind_cap;
  return spec;
}

void print_report_line(const std::string& name,
                       const eval::EvaluationReport& r) {
  std::printf("%-16s avg_cost %10.4f  da %10.4f  rt %10.4f  rmse %8.4f\n",
              name.c_str(), r.avg_cost, r.avg_da_cost, r.avg_rt_cost, r.rmse);
}

void cmd_gen_data(cli::ExperimentConfig config, const std::string& out) {
  config.data.source = "synth";  // this command always synthesizes
  data::SampleSet set = cli::load_samples(config);
  std::ostringstream csv;
  data::write_csv(set, csv);
  train::write_file_atomic(out, csv.str());
  std::printf("wrote %s (%zu records, %.17g kW capacity)\n", out.c_str(),
              set.size(), set.wind_cap);
}

void cmd_train(const cli::ExperimentConfig& config, const std::string& out) {
  data::SampleSet all = cli::load_samples(config);
  const market::MarketSpec spec = aligned_spec(config, all);
  auto [train_set, test_set] =
      data::split(all, config.data.train_frac, spec.horizon);
  (void)test_set;

  train::RunWriter writer(out, config.training.checkpoint_every);
  writer.write_config_snapshot(cli::config_text(config));
  train::TrainResult result =
      config.training.core.loss == train::LossKind::Value
          ? train::train_value_oriented(train_set, spec, config.training.core,
                                        &writer)
          : train::train_quality(train_set, config.training.core, &writer);
  writer.finish(result.model, result.scaler);
  std::printf("trained %zu epochs%s, final loss %.17g -> %s\n",
              result.trace.epochs.size(),
              result.trace.early_stopped ? " (early stop)" : "",
              result.trace.epochs.back().mean_loss, out.c_str());
}

void cmd_eval(const cli::ExperimentConfig& config,
              const std::string& model_path, const std::string& out) {
  auto [model, scaler] = forecast::ForecastModel::load_file(model_path);
  data::SampleSet all = cli::load_samples(config);
  const market::MarketSpec spec = aligned_spec(config, all);
  auto [train_set, test_set] =
      data::split(all, config.data.train_frac, spec.horizon);
  (void)train_set;

  eval::RtPriceOverride prices;
  prices.up_costs = config.evaluation.rt_up_override;
  prices.down_costs = config.evaluation.rt_down_override;
  const bool overridden =
      !prices.up_costs.empty() || !prices.down_costs.empty();
  eval::EvaluationReport report =
      overridden
          ? eval::evaluate_with_override(model, scaler, test_set, spec, prices)
          : eval::simulate_operation(model, scaler, test_set, spec);

  std::filesystem::create_directories(out);
  std::vector<eval::ApproachResult> results;
  results.push_back({"model", report, 0.0});
  train::write_file_atomic(out + "/metrics.json", eval::metrics_json(results));
  train::write_file_atomic(out + "/hourly.csv", eval::hourly_csv(report));
  print_report_line(overridden ? "model(override)" : "model", report);
  std::printf("-> %s\n", out.c_str());
}

void cmd_compare(const cli::ExperimentConfig& config, const std::string& out) {
  data::SampleSet all = cli::load_samples(config);
  const market::MarketSpec spec = aligned_spec(config, all);
  auto [train_set, test_set] =
      data::split(all, config.data.train_frac, spec.horizon);

  eval::CompareConfig cc;
  cc.training = config.training.core;
  cc.knn_k = config.evaluation.knn;
  cc.scenarios = config.evaluation.scenarios;
  cc.include_sto_opt = config.evaluation.include_sto_opt;
  std::vector<eval::ApproachResult> results =
      eval::run_comparison(train_set, test_set, spec, cc);

  eval::write_comparison(results, out);
  for (const eval::ApproachResult& r : results) {
    print_report_line(r.name, r.report);
  }
  std::printf("-> %s\n", out.c_str());
}

void cmd_sweep(const cli::ExperimentConfig& config, const std::string& out) {
  data::SampleSet all = cli::load_samples(config);
  const market::MarketSpec spec = aligned_spec(config, all);

  eval::SweepConfig sc;
  sc.training = config.training.core;
  sc.split_frac = config.data.train_frac;
  std::vector<eval::SweepRow> rows =
      eval::capacity_sweep(all, spec, config.evaluation.capacities, sc);

  std::filesystem::create_directories(out);
  train::write_file_atomic(out + "/sweep.csv", eval::sweep_csv(rows));
  for (const eval::SweepRow& r : rows) {
    std::printf("capacity %6.2f  %-10s avg_cost %10.4f  rmse %8.4f\n",
                r.capacity, r.approach.c_str(), r.avg_cost, r.rmse);
  }
  std::printf("-> %s\n", out.c_str());
}

void cmd_uc(const cli::ExperimentConfig& config, const std::string& out) {
  data::SampleSet all = cli::load_samples(config);
  const market::MarketSpec spec = aligned_spec(config, all);
  if (spec.commit_costs.empty()) {
    throw cli::ConfigError(
        "config: [market] commit_costs is required for the uc command");
  }
  auto [train_set, test_set] =
      data::split(all, config.data.train_frac, spec.horizon);

  // Value training prices days through the commitment relaxation; the
  // accuracy baseline needs no market at all. Both are then operated with
  // the exact on/off schedule.
  train::TrainingConfig proposed_cfg = config.training.core;
  proposed_cfg.loss = train::LossKind::Value;
  proposed_cfg.day_ahead = train::DayAheadForm::RelaxedUc;
  auto t0 = std::chrono::steady_clock::now();
  train::TrainResult proposed =
      train::train_value_oriented(train_set, spec, proposed_cfg);
  double proposed_seconds = seconds_since(t0);
  eval::EvaluationReport proposed_rep =
      eval::evaluate_uc(proposed.model, proposed.scaler, test_set, spec,
                        config.evaluation.node_budget);

  train::TrainingConfig quae_cfg = config.training.core;
  quae_cfg.loss = train::LossKind::Mse;
  t0 = std::chrono::steady_clock::now();
  train::TrainResult quae = train::train_quality(train_set, quae_cfg);
  double quae_seconds = seconds_since(t0);
  eval::EvaluationReport quae_rep = eval::evaluate_uc(
      quae.model, quae.scaler, test_set, spec, config.evaluation.node_budget);

  std::vector<eval::ApproachResult> results;
  results.push_back({"proposed-uc", proposed_rep, proposed_seconds});
  results.push_back({"qua-e-uc", quae_rep, quae_seconds});
  eval::write_comparison(results, out);
  for (const eval::ApproachResult& r : results) {
    print_report_line(r.name, r.report);
    if (r.report.uc_budget_exhausted) {
      std::printf("%-16s node budget exhausted, worst gap %.6g\n",
                  r.name.c_str(), r.report.uc_worst_gap);
    }
  }
  std::printf("-> %s\n", out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispatch-value forecasting workbench"};
  app.require_subcommand(1);

  struct {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::string loss;
    double quantile = 0.5;
    std::uint64_t scenarios = 0;
    std::uint64_t knn = 0;
    std::string capacities;
    std::string rt_override;
  } f;

  CLI::App* gen = app.add_subcommand("gen-data", "write a synthetic history CSV");
  gen->add_option("--config", f.config, "experiment config file");
  gen->add_option("--seed", f.seed, "override the data seed");
  gen->add_option("--out", f.out, "output CSV path")->default_val("synth.csv");

  CLI::App* tr = app.add_subcommand("train", "train a forecaster");
  tr->add_option("--config", f.config, "experiment config file");
  tr->add_option("--seed", f.seed, "training seed")->required();
  tr->add_option("--out", f.out, "run directory")->default_val("run");
  tr->add_option("--loss", f.loss, "value, mse, or pinball");
  tr->add_option("--quantile", f.quantile, "pinball level");

  CLI::App* ev = app.add_subcommand("eval", "operate a trained model");
  std::string model_path;
  ev->add_option("model", model_path, "checkpoint path")->required();
  ev->add_option("--config", f.config, "experiment config file");
  ev->add_option("--out", f.out, "output directory")->default_val("eval");
  ev->add_option("--rt-cost-override", f.rt_override,
                 "replacement up-regulation prices, comma-separated");

  CLI::App* cp = app.add_subcommand("compare", "run the benchmark suite");
  cp->add_option("--config", f.config, "experiment config file");
  cp->add_option("--seed", f.seed, "training seed")->required();
  cp->add_option("--out", f.out, "output directory")->default_val("compare");
  cp->add_option("--scenarios", f.scenarios, "stochastic benchmark scenarios");
  cp->add_option("--knn", f.knn, "neighbors for scenario generation");

  CLI::App* sw = app.add_subcommand("sweep", "retrain across wind capacities");
  sw->add_option("--config", f.config, "experiment config file");
  sw->add_option("--seed", f.seed, "override the training seed");
  sw->add_option("--out", f.out, "output directory")->default_val("sweep");
  sw->add_option("--capacities", f.capacities,
                 "capacities to sweep, comma-separated");

  CLI::App* uc = app.add_subcommand("uc", "evaluate under unit commitment");
  uc->add_option("--config", f.config, "experiment config file");
  uc->add_option("--seed", f.seed, "override the training seed");
  uc->add_option("--out", f.out, "output directory")->default_val("uc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_with(2, "ConfigError", e.what());
  }

  return guarded([&] {
    cli::ExperimentConfig config = load_or_default(f.config);
    if (gen->parsed()) {
      if (gen->count("--seed")) config.data.seed = f.seed;
      cmd_gen_data(config, f.out);
    } else if (tr->parsed()) {
      config.training.core.seed = f.seed;  // mandatory for this command
      if (tr->count("--loss")) {
        config.training.core.loss = loss_from_flag(f.loss);
      }
      if (tr->count("--quantile")) config.training.core.quantile = f.quantile;
      cmd_train(config, f.out);
    } else if (ev->parsed()) {
      if (ev->count("--rt-cost-override")) {
        config.evaluation.rt_up_override =
            csv_list("--rt-cost-override", f.rt_override);
      }
      cmd_eval(config, model_path, f.out);
    } else if (cp->parsed()) {
      config.training.core.seed = f.seed;  // mandatory for this command
      if (cp->count("--scenarios")) {
        config.evaluation.scenarios = static_cast<std::size_t>(f.scenarios);
      }
      if (cp->count("--knn")) {
        config.evaluation.knn = static_cast<std::size_t>(f.knn);
      }
      cmd_compare(config, f.out);
    } else if (sw->parsed()) {
      if (sw->count("--seed")) config.training.core.seed = f.seed;
      if (sw->count("--capacities")) {
        config.evaluation.capacities = csv_list("--capacities", f.capacities);
      }
      cmd_sweep(config, f.out);
    } else if (uc->parsed()) {
      if (uc->count("--seed")) config.training.core.seed = f.seed;
      cmd_uc(config, f.out);
    }
  });
}
