#include "vof/forecast/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "vof/core/rng.hpp"
#include "vof/simd/kernels.hpp"

namespace vof::forecast {

namespace {

double sigmoid(double x) {
  // Split by sign to avoid exp overflow for large |x|.
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_config(const ModelConfig& config) {
  if (config.input_dim == 0) {
    throw DimensionMismatch("model: input_dim must be positive");
  }
  if (config.output_cap <= 0.0) {
    throw DimensionMismatch("model: output_cap must be positive");
  }
  if (config.arch == Architecture::Mlp) {
    for (std::size_t h : config.hidden) {
      if (h == 0) throw DimensionMismatch("model: hidden width must be positive");
    }
  }
}

}  // namespace

ForecastModel::ForecastModel(const ModelConfig& config, std::uint64_t seed)
    : config_(config) {
  check_config(config_);
  build_layout();
  Rng rng(seed);
  for (const LayerView& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (std::size_t i = 0; i < layer.out * layer.in; ++i) {
      params_[layer.w_off + i] = rng.uniform(-bound, bound);
    }
    for (std::size_t i = 0; i < layer.out; ++i) {
      params_[layer.b_off + i] = rng.uniform(-bound, bound);
    }
  }
}

ForecastModel::ForecastModel(const ModelConfig& config,
                             std::vector<double> params)
    : config_(config) {
  check_config(config_);
  build_layout();
  if (params.size() != params_.size()) {
    throw ShapeMismatch("model: checkpoint has wrong parameter count");
  }
  params_ = std::move(params);
}

void ForecastModel::build_layout() {
  std::vector<std::size_t> widths;
  widths.push_back(config_.input_dim);
  if (config_.arch == Architecture::Mlp) {
    for (std::size_t h : config_.hidden) widths.push_back(h);
  }
  widths.push_back(1);

  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    LayerView view;
    view.in = widths[l];
    view.out = widths[l + 1];
    view.w_off = off;
    off += view.out * view.in;
    view.b_off = off;
    off += view.out;
    layers_.push_back(view);
  }
  params_.assign(off, 0.0);
}

double ForecastModel::forward_raw(std::span<const double> s,
                                  std::vector<std::vector<double>>& pre,
                                  std::vector<std::vector<double>>& act) const {
  if (s.size() != config_.input_dim) {
    throw DimensionMismatch("model: feature vector has wrong length");
  }
  pre.resize(layers_.size());
  act.resize(layers_.size());
  const double* prev = s.data();
  std::size_t prev_n = s.size();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerView& layer = layers_[l];
    pre[l].resize(layer.out);
    for (std::size_t i = 0; i < layer.out; ++i) {
      const double* row = params_.data() + layer.w_off + i * layer.in;
      pre[l][i] = params_[layer.b_off + i] + simd::dot(row, prev, prev_n);
    }
    const bool last = (l + 1 == layers_.size());
    if (last) break;
    act[l].resize(layer.out);
    for (std::size_t i = 0; i < layer.out; ++i) {
      act[l][i] = pre[l][i] > 0.0 ? pre[l][i] : 0.0;
    }
    prev = act[l].data();
    prev_n = act[l].size();
  }
  return pre.back()[0];
}

double ForecastModel::predict(std::span<const double> s) const {
  std::vector<std::vector<double>> pre, act;
  const double raw = forward_raw(s, pre, act);
  return config_.output_cap * sigmoid(raw);
}

void ForecastModel::accumulate_gradient(std::span<const double> s,
                                        double upstream,
                                        std::vector<double>& grad) const {
  if (grad.size() != params_.size()) {
    throw ShapeMismatch("model: gradient buffer has wrong length");
  }
  std::vector<std::vector<double>> pre, act;
  const double raw = forward_raw(s, pre, act);
  const double sig = sigmoid(raw);
  // d predict / d raw through the scaled sigmoid output stage.
  double delta_scalar = upstream * config_.output_cap * sig * (1.0 - sig);

  std::vector<double> delta{delta_scalar};
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const LayerView& layer = layers_[l];
    const double* below =
        (l == 0) ? s.data() : act[l - 1].data();
    for (std::size_t i = 0; i < layer.out; ++i) {
      const double d = delta[i];
      if (d != 0.0) {
        simd::axpy(d, below, grad.data() + layer.w_off + i * layer.in,
                   layer.in);
      }
      grad[layer.b_off + i] += d;
    }
    if (l == 0) break;
    std::vector<double> next(layer.in, 0.0);
    for (std::size_t i = 0; i < layer.out; ++i) {
      const double d = delta[i];
      if (d != 0.0) {
        simd::axpy(d, params_.data() + layer.w_off + i * layer.in, next.data(),
                   layer.in);
      }
    }
    // ReLU gate of the layer below; zero subgradient at the kink.
    for (std::size_t j = 0; j < layer.in; ++j) {
      if (pre[l - 1][j] <= 0.0) next[j] = 0.0;
    }
    delta = std::move(next);
  }
}

void ForecastModel::save(std::ostream& out, const FeatureScaler& scaler) const {
  char buf[64];
  out << "vof-model 1\n";
  out << "arch " << (config_.arch == Architecture::Mlp ? "mlp" : "linear")
      << "\n";
  out << "input " << config_.input_dim << "\n";
  out << "hidden " << config_.hidden.size();
  for (std::size_t h : config_.hidden) out << ' ' << h;
  out << "\n";
  std::snprintf(buf, sizeof(buf), "%a", config_.output_cap);
  out << "cap " << buf << "\n";
  out << "scaler " << scaler.mean.size() << "\n";
  for (std::size_t j = 0; j < scaler.mean.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%a %a", scaler.mean[j], scaler.sd[j]);
    out << buf << "\n";
  }
  out << "params " << params_.size() << "\n";
  for (double p : params_) {
    std::snprintf(buf, sizeof(buf), "%a", p);
    out << buf << "\n";
  }
}

void ForecastModel::save_file(const std::string& path,
                              const FeatureScaler& scaler) const {
  std::ofstream out(path);
  if (!out) throw ShapeMismatch("model: cannot open " + path + " for writing");
  save(out, scaler);
  if (!out) throw ShapeMismatch("model: write to " + path + " failed");
}

std::pair<ForecastModel, FeatureScaler> ForecastModel::load(std::istream& in) {
  auto fail = [](const std::string& what) -> ShapeMismatch {
    return ShapeMismatch("model: malformed checkpoint (" + what + ")");
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "vof-model" || version != 1) {
    throw fail("header");
  }
  ModelConfig config;
  std::string key, arch;
  if (!(in >> key >> arch) || key != "arch") throw fail("arch");
  if (arch == "mlp") {
    config.arch = Architecture::Mlp;
  } else if (arch == "linear") {
    config.arch = Architecture::Linear;
  } else {
    throw fail("arch value");
  }
  std::size_t n = 0;
  if (!(in >> key >> config.input_dim) || key != "input") throw fail("input");
  if (!(in >> key >> n) || key != "hidden") throw fail("hidden");
  config.hidden.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> config.hidden[i])) throw fail("hidden width");
  }
  std::string num;
  if (!(in >> key >> num) || key != "cap") throw fail("cap");
  config.output_cap = std::strtod(num.c_str(), nullptr);
  FeatureScaler scaler;
  if (!(in >> key >> n) || key != "scaler") throw fail("scaler");
  scaler.mean.resize(n);
  scaler.sd.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::string m, sd;
    if (!(in >> m >> sd)) throw fail("scaler entry");
    scaler.mean[j] = std::strtod(m.c_str(), nullptr);
    scaler.sd[j] = std::strtod(sd.c_str(), nullptr);
  }
  if (!(in >> key >> n) || key != "params") throw fail("params");
  std::vector<double> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> num)) throw fail("parameter entry");
    params[i] = std::strtod(num.c_str(), nullptr);
  }
  return {ForecastModel(config, std::move(params)), std::move(scaler)};
}

std::pair<ForecastModel, FeatureScaler> ForecastModel::load_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeMismatch("model: cannot open " + path);
  return load(in);
}

}  // namespace vof::forecast
