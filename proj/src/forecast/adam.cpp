#include "vof/forecast/adam.hpp"

#include <cmath>

namespace vof::forecast {

Adam::Adam(std::size_t n, AdamConfig config)
    : config_(config), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ShapeMismatch("adam: parameter/gradient size differs from state");
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double m_hat = m_[i] / corr1;
    const double v_hat = v_[i] / corr2;
    params[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
  }
}

}  // namespace vof::forecast
