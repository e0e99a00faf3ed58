#pragma once

#include <vector>

#include "vof/core/matrix.hpp"
#include "vof/lp/problem.hpp"
#include "vof/market/spec.hpp"

namespace vof::market {

// Day-ahead dispatch: min rho'x subject to per-hour balance
// sum_g x[t,g] + ytilde[t] = load[t], generator boxes and ramp limits.
// The balance dual is the hourly price lambda.
struct DayAheadResult {
  Matrix schedule;               // T x n_gen
  double cost = 0.0;             // sum rho'x
  std::vector<double> lambda;    // T balance duals, $/kW
  Matrix cap_duals;              // T x n_gen, generator capacity rents
  Matrix ramp_up_duals;          // (T-1) x n_gen, rows x[t+1]-x[t] <= r
  Matrix ramp_down_duals;        // (T-1) x n_gen, rows x[t]-x[t+1] <= r
};

// Single-hour balancing: min rho_up'zup - rho_down'zdn subject to
// sum(zup) - sum(zdn) = ytilde - y and resource boxes. The balance dual nu
// is the realized marginal imbalance price.
struct RealTimeResult {
  std::vector<double> z_up;      // n_up
  std::vector<double> z_down;    // n_down
  double cost = 0.0;             // may be negative (surplus sold)
  double nu = 0.0;               // $/kW
  std::vector<double> up_cap_duals;    // n_up
  std::vector<double> down_cap_duals;  // n_down
};

// Per-day dual data feeding the value-oriented loss, plus the constant terms
// that complete the primal-cost reconstruction.
struct DualBundle {
  std::vector<double> lambda;  // T
  std::vector<double> nu;      // T
  double psi_day_ahead = 0.0;  // $
  std::vector<double> psi_real_time;  // T, $
};

lp::LinearProgram build_day_ahead(const MarketSpec& spec,
                                  const std::vector<double>& y_tilde,
                                  const std::vector<double>& load);
DayAheadResult solve_day_ahead(const MarketSpec& spec,
                               const std::vector<double>& y_tilde,
                               const std::vector<double>& load);

lp::LinearProgram build_real_time(const MarketSpec& spec, double y_tilde_t,
                                  double y_t);
RealTimeResult solve_real_time(const MarketSpec& spec, double y_tilde_t,
                               double y_t);

// Reassembles day-ahead + real-time primal cost from the dual side:
//   cost = sum_t(-lambda[t]*ytilde[t] - nu[t]*(y[t]-ytilde[t]))
//        + psi_day_ahead + sum_t psi_real_time[t]
// and throws IdentityViolation if the reconstruction misses. The psi terms
// are computed from capacity/ramp duals and the load, never from the primal
// cost itself, so the identity is a genuine cross-check.
DualBundle dual_decomposition(const DayAheadResult& da,
                              const std::vector<RealTimeResult>& rt,
                              const std::vector<double>& y_tilde,
                              const std::vector<double>& y,
                              const MarketSpec& spec,
                              const std::vector<double>& load);

}  // namespace vof::market
