#pragma once

#include "vof/forecast/errors.hpp"

namespace vof::forecast {

// Decision value of a forecast under fixed day-ahead/real-time prices:
// -lambda * y_tilde - nu * (y - y_tilde). Lower is better; with prices held
// at the optimum of the dispatch problems this equals the negated value terms
// of the two-stage cost, so minimizing it minimizes realized operating cost.
double value_loss(double y_tilde, double y, double lambda, double nu);

// d value_loss / d y_tilde with prices frozen. Constant in y_tilde because the
// loss is affine while the active dispatch basis does not change.
double value_loss_grad(double lambda, double nu);

double mse_loss(double y_hat, double y);
double mse_grad(double y_hat, double y);

// Quantile (pinball) loss at level tau in (0, 1). Throws InvalidQuantile
// otherwise. The subgradient at y_hat == y takes the left limit, i.e. the
// slope from the y_hat < y side.
double pinball_loss(double y_hat, double y, double tau);
double pinball_grad(double y_hat, double y, double tau);

// Critical fractile implied by a day-ahead price between the two real-time
// regimes: (lambda - nu_minus) / (nu_plus - nu_minus). Throws
// DegeneratePrices when nu_plus == nu_minus and OutOfRange when lambda lies
// outside [nu_minus, nu_plus].
double nominal_level(double lambda, double nu_plus, double nu_minus);

}  // namespace vof::forecast
