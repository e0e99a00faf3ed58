#pragma once

#include <vector>

#include "vof/core/matrix.hpp"
#include "vof/lp/problem.hpp"
#include "vof/market/spec.hpp"

namespace vof::market {

// Two-stage scenario program in extensive form: first-stage generator
// schedule and wind commitment ytilde, second-stage balancing per scenario
// with probability-weighted costs.
struct StochasticResult {
  Matrix schedule;                // T x n_gen
  std::vector<double> y_tilde;    // T, the value-maximizing commitment
  std::vector<double> lambda;     // T, first-stage balance duals
  double expected_cost = 0.0;
};

// scenarios: S x T realizations of wind power; probs: S nonnegative weights
// summing to 1. Throws ScaleExceeded when the extensive form would outgrow
// the dense LP layer.
lp::LinearProgram build_stochastic(const MarketSpec& spec,
                                   const std::vector<double>& load,
                                   const Matrix& scenarios,
                                   const std::vector<double>& probs);
StochasticResult solve_stochastic(const MarketSpec& spec,
                                  const std::vector<double>& load,
                                  const Matrix& scenarios,
                                  const std::vector<double>& probs);

}  // namespace vof::market
