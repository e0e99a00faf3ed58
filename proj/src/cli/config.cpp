#include "vof/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <type_traits>

#include "vof/data/csv.hpp"
#include "vof/data/synth.hpp"

namespace vof::cli {
namespace {

struct Cursor {
  const std::string& name;
  int line = 0;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
  throw ConfigError(at.name + " line " + std::to_string(at.line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// A '#' starts a comment unless it sits inside a double-quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double number(const Cursor& at, const std::string& key,
              const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(x)) {
    fail(at, key + ": expected a number, got '" + value + "'");
  }
  return x;
}

long long integer(const Cursor& at, const std::string& key,
                  const std::string& value) {
  double x = number(at, key, value);
  if (x != std::floor(x) || std::fabs(x) > 9e15) {
    fail(at, key + ": expected an integer, got '" + value + "'");
  }
  return static_cast<long long>(x);
}

bool boolean(const Cursor& at, const std::string& key,
             const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(at, key + ": expected true or false, got '" + value + "'");
}

std::string text(const Cursor& at, const std::string& key,
                 const std::string& value) {
  if (!value.empty() && value.front() == '"') {
    if (value.size() < 2 || value.back() != '"') {
      fail(at, key + ": unterminated string");
    }
    return value.substr(1, value.size() - 2);
  }
  if (value.empty() || value.find_first_of(" \t\"") != std::string::npos) {
    fail(at, key + ": expected a quoted string");
  }
  return value;
}

std::vector<double> array(const Cursor& at, const std::string& key,
                          const std::string& value) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    fail(at, key + ": expected [a, b, ...]");
  }
  std::vector<double> out;
  std::string body = trim(value.substr(1, value.size() - 2));
  std::size_t pos = 0;
  while (pos <= body.size() && !body.empty()) {
    std::size_t comma = body.find(',', pos);
    std::string item = trim(body.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (item.empty()) fail(at, key + ": empty array element");
    out.push_back(number(at, key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> size_array(const Cursor& at, const std::string& key,
                                    const std::string& value) {
  std::vector<std::size_t> out;
  for (double x : array(at, key, value)) {
    if (x != std::floor(x) || x < 1.0) {
      fail(at, key + ": widths must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

void apply_market(const Cursor& at, market::MarketSpec& m,
                  const std::string& key, const std::string& value) {
  if (key == "gen_costs") m.gen_costs = array(at, key, value);
  else if (key == "gen_caps") m.gen_caps = array(at, key, value);
  else if (key == "gen_ramps") m.gen_ramps = array(at, key, value);
  else if (key == "up_costs") m.up_costs = array(at, key, value);
  else if (key == "up_caps") m.up_caps = array(at, key, value);
  else if (key == "down_costs") m.down_costs = array(at, key, value);
  else if (key == "down_caps") m.down_caps = array(at, key, value);
  else if (key == "commit_costs") m.commit_costs = array(at, key, value);
  else if (key == "wind_cap") m.wind_cap = number(at, key, value);
  else if (key == "horizon") {
    long long h = integer(at, key, value);
    if (h < 1) fail(at, "horizon must be at least 1");
    m.horizon = static_cast<std::size_t>(h);
  } else {
    fail(at, "unknown key '" + key + "' in [market]");
  }
}

void apply_data(const Cursor& at, DataSection& d, const std::string& key,
                const std::string& value) {
  if (key == "source") d.source = text(at, key, value);
  else if (key == "seed") {
    long long s = integer(at, key, value);
    if (s < 0) fail(at, "seed must be nonnegative");
    d.seed = static_cast<std::uint64_t>(s);
  } else if (key == "days") {
    long long n = integer(at, key, value);
    if (n < 1) fail(at, "days must be at least 1");
    d.days = static_cast<std::size_t>(n);
  } else if (key == "wind_multiplier") {
    d.wind_multiplier = number(at, key, value);
  } else if (key == "train_frac") {
    d.train_frac = number(at, key, value);
  } else {
    fail(at, "unknown key '" + key + "' in [data]");
  }
}

void apply_training(const Cursor& at, TrainingSection& t,
                    const std::string& key, const std::string& value) {
  train::TrainingConfig& c = t.core;
  if (key == "epochs") c.epochs = static_cast<int>(integer(at, key, value));
  else if (key == "batch_days") {
    c.batch_days = static_cast<int>(integer(at, key, value));
  } else if (key == "steps_per_epoch") {
    c.steps_per_epoch = static_cast<int>(integer(at, key, value));
  } else if (key == "lr") c.lr = number(at, key, value);
  else if (key == "seed") {
    long long s = integer(at, key, value);
    if (s < 0) fail(at, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "loss") {
    std::string v = text(at, key, value);
    if (v == "value") c.loss = train::LossKind::Value;
    else if (v == "mse") c.loss = train::LossKind::Mse;
    else if (v == "pinball") c.loss = train::LossKind::Pinball;
    else fail(at, "loss must be value, mse, or pinball");
  } else if (key == "quantile") c.quantile = number(at, key, value);
  else if (key == "arch") {
    std::string v = text(at, key, value);
    if (v == "mlp") c.model.arch = forecast::Architecture::Mlp;
    else if (v == "linear") c.model.arch = forecast::Architecture::Linear;
    else fail(at, "arch must be mlp or linear");
  } else if (key == "hidden") c.model.hidden = size_array(at, key, value);
  else if (key == "day_ahead") {
    std::string v = text(at, key, value);
    if (v == "dispatch") c.day_ahead = train::DayAheadForm::Dispatch;
    else if (v == "relaxed_uc") c.day_ahead = train::DayAheadForm::RelaxedUc;
    else fail(at, "day_ahead must be dispatch or relaxed_uc");
  } else if (key == "early_stop_delta") {
    c.early_stop_delta = number(at, key, value);
  } else if (key == "early_stop_window") {
    c.early_stop_window = static_cast<int>(integer(at, key, value));
  } else if (key == "checkpoint_every") {
    t.checkpoint_every = static_cast<int>(integer(at, key, value));
  } else {
    fail(at, "unknown key '" + key + "' in [training]");
  }
}

void apply_evaluation(const Cursor& at, EvaluationSection& e,
                      const std::string& key, const std::string& value) {
  if (key == "scenarios") {
    long long n = integer(at, key, value);
    if (n < 1) fail(at, "scenarios must be at least 1");
    e.scenarios = static_cast<std::size_t>(n);
  } else if (key == "knn") {
    long long n = integer(at, key, value);
    if (n < 1) fail(at, "knn must be at least 1");
    e.knn = static_cast<std::size_t>(n);
  } else if (key == "capacities") {
    e.capacities = array(at, key, value);
  } else if (key == "include_sto_opt") {
    e.include_sto_opt = boolean(at, key, value);
  } else if (key == "node_budget") {
    long long n = integer(at, key, value);
    if (n < 1) fail(at, "node_budget must be at least 1");
    e.node_budget = static_cast<long>(n);
  } else if (key == "rt_up_override") {
    e.rt_up_override = array(at, key, value);
  } else if (key == "rt_down_override") {
    e.rt_down_override = array(at, key, value);
  } else {
    fail(at, "unknown key '" + key + "' in [evaluation]");
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& name) {
  ExperimentConfig config;
  Cursor at{name, 0};
  // 0 = before any section header; keys there have no home.
  enum class Section { None, Market, Data, Training, Evaluation };
  Section section = Section::None;

  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(at, "unterminated section header");
      std::string s = trim(line.substr(1, line.size() - 2));
      if (s == "market") section = Section::Market;
      else if (s == "data") section = Section::Data;
      else if (s == "training") section = Section::Training;
      else if (s == "evaluation") section = Section::Evaluation;
      else fail(at, "unknown section [" + s + "]");
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(at, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(at, "empty key");
    if (value.empty()) fail(at, key + ": empty value");

    switch (section) {
      case Section::None:
        fail(at, "key '" + key + "' appears before any [section]");
      case Section::Market:
        apply_market(at, config.market, key, value);
        break;
      case Section::Data:
        apply_data(at, config.data, key, value);
        break;
      case Section::Training:
        apply_training(at, config.training, key, value);
        break;
      case Section::Evaluation:
        apply_evaluation(at, config.evaluation, key, value);
        break;
    }
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  ExperimentConfig config = parse_config(in, path);
  if (config.data.source != "synth" &&
      !std::filesystem::exists(config.data.source)) {
    throw ConfigError("config: data source does not exist: " +
                      config.data.source);
  }
  return config;
}

namespace {

void put(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += key;
  out += " = ";
  out += buf;
  out += '\n';
}

void put(std::string& out, const char* key, long long v) {
  out += key;
  out += " = ";
  out += std::to_string(v);
  out += '\n';
}

void put(std::string& out, const char* key, const std::string& v) {
  out += key;
  out += " = \"";
  out += v;
  out += "\"\n";
}

template <typename T>
void put_array(std::string& out, const char* key, const std::vector<T>& v) {
  out += key;
  out += " = [";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      out += buf;
    } else {
      out += std::to_string(v[i]);
    }
  }
  out += "]\n";
}

}  // namespace

std::string config_text(const ExperimentConfig& config) {
  std::string out;
  out += "[market]\n";
  put_array(out, "gen_costs", config.market.gen_costs);
  put_array(out, "gen_caps", config.market.gen_caps);
  put_array(out, "gen_ramps", config.market.gen_ramps);
  put_array(out, "up_costs", config.market.up_costs);
  put_array(out, "up_caps", config.market.up_caps);
  put_array(out, "down_costs", config.market.down_costs);
  put_array(out, "down_caps", config.market.down_caps);
  if (!config.market.commit_costs.empty()) {
    put_array(out, "commit_costs", config.market.commit_costs);
  }
  put(out, "wind_cap", config.market.wind_cap);
  put(out, "horizon", static_cast<long long>(config.market.horizon));

  out += "\n[data]\n";
  put(out, "source", config.data.source);
  put(out, "seed", static_cast<long long>(config.data.seed));
  put(out, "days", static_cast<long long>(config.data.days));
  put(out, "wind_multiplier", config.data.wind_multiplier);
  put(out, "train_frac", config.data.train_frac);

  const train::TrainingConfig& c = config.training.core;
  out += "\n[training]\n";
  put(out, "epochs", static_cast<long long>(c.epochs));
  put(out, "batch_days", static_cast<long long>(c.batch_days));
  put(out, "steps_per_epoch", static_cast<long long>(c.steps_per_epoch));
  put(out, "lr", c.lr);
  put(out, "seed", static_cast<long long>(c.seed));
  put(out, "loss",
      std::string(c.loss == train::LossKind::Value  ? "value"
                  : c.loss == train::LossKind::Mse ? "mse"
                                                   : "pinball"));
  put(out, "quantile", c.quantile);
  put(out, "arch", std::string(c.model.arch == forecast::Architecture::Mlp
                                   ? "mlp"
                                   : "linear"));
  put_array(out, "hidden", c.model.hidden);
  put(out, "day_ahead",
      std::string(c.day_ahead == train::DayAheadForm::Dispatch
                      ? "dispatch"
                      : "relaxed_uc"));
  put(out, "early_stop_delta", c.early_stop_delta);
  put(out, "early_stop_window", static_cast<long long>(c.early_stop_window));
  put(out, "checkpoint_every",
      static_cast<long long>(config.training.checkpoint_every));

  out += "\n[evaluation]\n";
  put(out, "scenarios", static_cast<long long>(config.evaluation.scenarios));
  put(out, "knn", static_cast<long long>(config.evaluation.knn));
  put_array(out, "capacities", config.evaluation.capacities);
  out += std::string("include_sto_opt = ") +
         (config.evaluation.include_sto_opt ? "true" : "false") + "\n";
  put(out, "node_budget", static_cast<long long>(config.evaluation.node_budget));
  if (!config.evaluation.rt_up_override.empty()) {
    put_array(out, "rt_up_override", config.evaluation.rt_up_override);
  }
  if (!config.evaluation.rt_down_override.empty()) {
    put_array(out, "rt_down_override", config.evaluation.rt_down_override);
  }
  return out;
}

data::SampleSet load_samples(const ExperimentConfig& config) {
  data::SampleSet set =
      config.data.source == "synth"
          ? data::synth_generate(config.data.seed, config.data.days,
                                 config.market.wind_cap)
          : data::load_csv_file(config.data.source, config.market.wind_cap);
  if (config.data.wind_multiplier != 1.0) {
    data::scale_wind(set, config.data.wind_multiplier);
  }
  return set;
}

}  // namespace vof::cli
