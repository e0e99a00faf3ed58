#pragma once

// Closed-form merit-order oracles for single-period market instances, used to
// cross-check the LP-based dispatch path. Everything here is straight
// arithmetic on sorted price ladders; no LinearProgram is ever built.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "vof/market/spec.hpp"

namespace vof::testing {

// Cheapest-first thermal cost of serving a nonnegative residual load.
// Returns +inf if the fleet cannot carry it.
inline double merit_order_da_cost(const vof::market::MarketSpec& spec,
                                  double residual) {
  if (residual < 0.0) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(spec.n_gen());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spec.gen_costs[a] < spec.gen_costs[b];
  });
  double cost = 0.0, left = residual;
  for (std::size_t g : order) {
    const double take = std::min(left, spec.gen_caps[g]);
    cost += take * spec.gen_costs[g];
    left -= take;
    if (left <= 1e-12) return cost;
  }
  return left <= 1e-9 ? cost : std::numeric_limits<double>::infinity();
}

// Balancing cost of a deviation dev = ytilde - y. Shortage buys the cheapest
// upward energy first; surplus sells to the highest-utility sink first.
inline double merit_order_rt_cost(const vof::market::MarketSpec& spec,
                                  double dev) {
  double cost = 0.0;
  if (dev > 0.0) {
    std::vector<std::size_t> order(spec.n_up());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return spec.up_costs[a] < spec.up_costs[b];
    });
    double left = dev;
    for (std::size_t i : order) {
      const double take = std::min(left, spec.up_caps[i]);
      cost += take * spec.up_costs[i];
      left -= take;
    }
    if (left > 1e-9) return std::numeric_limits<double>::infinity();
  } else if (dev < 0.0) {
    std::vector<std::size_t> order(spec.n_down());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return spec.down_costs[a] > spec.down_costs[b];
    });
    double left = -dev;
    for (std::size_t j : order) {
      const double take = std::min(left, spec.down_caps[j]);
      cost -= take * spec.down_costs[j];
      left -= take;
    }
    if (left > 1e-9) return std::numeric_limits<double>::infinity();
  }
  return cost;
}

// Expected two-stage cost of committing ytilde, under scenario weights.
inline double two_stage_cost_at(const vof::market::MarketSpec& spec,
                                double load, double y_tilde,
                                const std::vector<double>& scen,
                                const std::vector<double>& probs) {
  double j = merit_order_da_cost(spec, load - y_tilde);
  for (std::size_t s = 0; s < scen.size(); ++s) {
    j += probs[s] * merit_order_rt_cost(spec, y_tilde - scen[s]);
  }
  return j;
}

struct GridOptimum {
  double y_tilde = 0.0;
  double cost = std::numeric_limits<double>::infinity();
};

// Minimizes the single-period two-stage cost by scanning a dense grid plus
// every breakpoint candidate (scenario values, capacity knees, bounds).
inline GridOptimum stochastic_grid_oracle(const vof::market::MarketSpec& spec,
                                          double load,
                                          const std::vector<double>& scen,
                                          const std::vector<double>& probs) {
  const double hi = std::min(spec.wind_cap, load);
  std::vector<double> cands;
  for (double v = 0.0; v <= hi + 1e-12; v += 0.005) cands.push_back(v);
  cands.push_back(hi);
  for (double y : scen) {
    if (y >= 0.0 && y <= hi) cands.push_back(y);
  }
  // Thermal capacity knees: residual crossing a prefix of the merit order.
  std::vector<double> caps_sorted = spec.gen_caps;
  std::sort(caps_sorted.begin(), caps_sorted.end());
  double prefix = 0.0;
  for (double c : caps_sorted) {
    prefix += c;
    const double cand = load - prefix;
    if (cand >= 0.0 && cand <= hi) cands.push_back(cand);
  }
  GridOptimum best;
  for (double v : cands) {
    const double j = two_stage_cost_at(spec, load, v, scen, probs);
    if (j < best.cost) {
      best.cost = j;
      best.y_tilde = v;
    }
  }
  return best;
}

}  // namespace vof::testing
