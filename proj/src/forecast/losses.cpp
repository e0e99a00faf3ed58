#include "vof/forecast/losses.hpp"

#include <string>

namespace vof::forecast {

double value_loss(double y_tilde, double y, double lambda, double nu) {
  return -lambda * y_tilde - nu * (y - y_tilde);
}

double value_loss_grad(double lambda, double nu) { return nu - lambda; }

double mse_loss(double y_hat, double y) {
  const double e = y_hat - y;
  return e * e;
}

double mse_grad(double y_hat, double y) { return 2.0 * (y_hat - y); }

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InvalidQuantile("pinball: level " + std::to_string(tau) +
                          " outside (0, 1)");
  }
}

}  // namespace

double pinball_loss(double y_hat, double y, double tau) {
  check_tau(tau);
  const double d = y - y_hat;
  return d >= 0.0 ? tau * d : (tau - 1.0) * d;
}

double pinball_grad(double y_hat, double y, double tau) {
  check_tau(tau);
  // Left limit at the kink: y_hat == y reports the slope of the y_hat < y
  // branch, matching how an under-forecast is priced.
  return y_hat <= y ? -tau : 1.0 - tau;
}

double nominal_level(double lambda, double nu_plus, double nu_minus) {
  if (nu_plus == nu_minus) {
    throw DegeneratePrices(
        "nominal level: up and down regulation prices coincide");
  }
  const double level = (lambda - nu_minus) / (nu_plus - nu_minus);
  if (level < 0.0 || level > 1.0) {
    throw OutOfRange("nominal level: day-ahead price " +
                     std::to_string(lambda) +
                     " outside the real-time price band");
  }
  return level;
}

}  // namespace vof::forecast
