#include "vof/market/dispatch.hpp"

#include <cmath>
#include <string>

#include "vof/lp/simplex.hpp"

namespace vof::market {
namespace {

constexpr double kIdentityTol = 1e-8;

void check_day_ahead_inputs(const MarketSpec& spec,
                            const std::vector<double>& y_tilde,
                            const std::vector<double>& load) {
  spec.validate();
  const std::size_t T = spec.horizon;
  if (y_tilde.size() != T || load.size() != T) {
    throw lp::MalformedProblem("day-ahead: forecast/load length != horizon");
  }
  const double cap = spec.total_gen_cap();
  for (std::size_t t = 0; t < T; ++t) {
    if (!(load[t] > 0.0)) {
      throw lp::MalformedProblem("day-ahead: load must be positive at hour " +
                                 std::to_string(t));
    }
    if (y_tilde[t] < 0.0 || y_tilde[t] > spec.wind_cap) {
      throw lp::MalformedProblem(
          "day-ahead: forecast outside [0, wind cap] at hour " +
          std::to_string(t));
    }
    // Cheap per-hour screens; ramp-coupled infeasibility is left to the LP.
    if (y_tilde[t] > load[t]) {
      throw InfeasibleByConstruction(
          "day-ahead: forecast exceeds load at hour " + std::to_string(t));
    }
    if (load[t] - y_tilde[t] > cap) {
      throw InfeasibleByConstruction(
          "day-ahead: residual load exceeds thermal capacity at hour " +
          std::to_string(t));
    }
  }
}

}  // namespace

lp::LinearProgram build_day_ahead(const MarketSpec& spec,
                                  const std::vector<double>& y_tilde,
                                  const std::vector<double>& load) {
  check_day_ahead_inputs(spec, y_tilde, load);
  const std::size_t T = spec.horizon, G = spec.n_gen();
  lp::LinearProgram lp(T * G);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      lp.objective()[t * G + g] = spec.gen_costs[g];
      lp.set_bounds(t * G + g, 0.0, spec.gen_caps[g]);
    }
  }
  // Balance per hour, oriented so the dual is the energy price lambda.
  for (std::size_t t = 0; t < T; ++t) {
    double* row = lp.add_eq_row(load[t] - y_tilde[t]);
    for (std::size_t g = 0; g < G; ++g) row[t * G + g] = 1.0;
  }
  // Ramp rows: all up-direction rows first, then all down-direction rows.
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      double* row = lp.add_ub_row(spec.gen_ramps[g]);
      row[(t + 1) * G + g] = 1.0;
      row[t * G + g] = -1.0;
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      double* row = lp.add_ub_row(spec.gen_ramps[g]);
      row[t * G + g] = 1.0;
      row[(t + 1) * G + g] = -1.0;
    }
  }
  return lp;
}

DayAheadResult solve_day_ahead(const MarketSpec& spec,
                               const std::vector<double>& y_tilde,
                               const std::vector<double>& load) {
  const lp::LinearProgram lp = build_day_ahead(spec, y_tilde, load);
  const lp::LpSolution sol = lp::solve_lp(lp);
  if (sol.status == lp::SolveStatus::Infeasible) {
    throw InfeasibleByConstruction(
        "day-ahead: dispatch infeasible under ramp limits");
  }
  if (sol.status != lp::SolveStatus::Optimal) {
    throw lp::NumericalFailure("day-ahead: unexpected unbounded dispatch");
  }
  const std::size_t T = spec.horizon, G = spec.n_gen();
  DayAheadResult r;
  r.cost = sol.objective;
  r.schedule = Matrix(T, G);
  r.cap_duals = Matrix(T, G);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      r.schedule(t, g) = sol.x[t * G + g];
      r.cap_duals(t, g) = sol.upper_duals[t * G + g];
    }
  }
  r.lambda = sol.eq_duals;
  r.ramp_up_duals = Matrix(T > 0 ? T - 1 : 0, G);
  r.ramp_down_duals = Matrix(T > 0 ? T - 1 : 0, G);
  const std::size_t down_base = (T - 1) * G;
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      r.ramp_up_duals(t, g) = sol.ub_duals[t * G + g];
      r.ramp_down_duals(t, g) = sol.ub_duals[down_base + t * G + g];
    }
  }
  return r;
}

lp::LinearProgram build_real_time(const MarketSpec& spec, double y_tilde_t,
                                  double y_t) {
  spec.validate();
  if (y_tilde_t < 0.0 || y_t < 0.0) {
    throw lp::MalformedProblem("real-time: negative forecast or realization");
  }
  const double dev = y_tilde_t - y_t;  // positive means shortage
  if (dev > spec.total_up_cap()) {
    throw BalancingInfeasible(
        "real-time: shortage beyond upward capacity by " +
            std::to_string(dev - spec.total_up_cap()) + " kW",
        dev - spec.total_up_cap());
  }
  if (-dev > spec.total_down_cap()) {
    throw BalancingInfeasible(
        "real-time: surplus beyond downward capacity by " +
            std::to_string(-dev - spec.total_down_cap()) + " kW",
        -dev - spec.total_down_cap());
  }
  const std::size_t U = spec.n_up(), D = spec.n_down();
  lp::LinearProgram lp(U + D);
  for (std::size_t i = 0; i < U; ++i) {
    lp.objective()[i] = spec.up_costs[i];
    lp.set_bounds(i, 0.0, spec.up_caps[i]);
  }
  for (std::size_t j = 0; j < D; ++j) {
    lp.objective()[U + j] = -spec.down_costs[j];
    lp.set_bounds(U + j, 0.0, spec.down_caps[j]);
  }
  // Balance oriented so shortage prices at the marginal up resource.
  double* row = lp.add_eq_row(dev);
  for (std::size_t i = 0; i < U; ++i) row[i] = 1.0;
  for (std::size_t j = 0; j < D; ++j) row[U + j] = -1.0;
  return lp;
}

RealTimeResult solve_real_time(const MarketSpec& spec, double y_tilde_t,
                               double y_t) {
  const lp::LinearProgram lp = build_real_time(spec, y_tilde_t, y_t);
  const lp::LpSolution sol = lp::solve_lp(lp);
  if (sol.status != lp::SolveStatus::Optimal) {
    throw lp::NumericalFailure(std::string("real-time: unexpected ") +
                               lp::to_string(sol.status) + " balancing solve");
  }
  const std::size_t U = spec.n_up(), D = spec.n_down();
  RealTimeResult r;
  r.cost = sol.objective;
  r.nu = sol.eq_duals[0];
  r.z_up.assign(sol.x.begin(), sol.x.begin() + U);
  r.z_down.assign(sol.x.begin() + U, sol.x.end());
  r.up_cap_duals.assign(sol.upper_duals.begin(), sol.upper_duals.begin() + U);
  r.down_cap_duals.assign(sol.upper_duals.begin() + U, sol.upper_duals.end());
  return r;
}

DualBundle dual_decomposition(const DayAheadResult& da,
                              const std::vector<RealTimeResult>& rt,
                              const std::vector<double>& y_tilde,
                              const std::vector<double>& y,
                              const MarketSpec& spec,
                              const std::vector<double>& load) {
  const std::size_t T = spec.horizon, G = spec.n_gen();
  if (rt.size() != T || y_tilde.size() != T || y.size() != T ||
      load.size() != T || da.lambda.size() != T) {
    throw lp::MalformedProblem("dual decomposition: horizon mismatch");
  }
  DualBundle b;
  b.lambda = da.lambda;
  b.nu.resize(T);
  b.psi_real_time.resize(T);

  // psi terms come from the dual side only: load revenue minus the rents of
  // every binding capacity/ramp limit.
  double psi_d = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    psi_d += da.lambda[t] * load[t];
    for (std::size_t g = 0; g < G; ++g) {
      psi_d -= da.cap_duals(t, g) * spec.gen_caps[g];
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      psi_d -= (da.ramp_up_duals(t, g) + da.ramp_down_duals(t, g)) *
               spec.gen_ramps[g];
    }
  }
  b.psi_day_ahead = psi_d;

  double dual_side = psi_d;
  double primal = da.cost;
  for (std::size_t t = 0; t < T; ++t) {
    b.nu[t] = rt[t].nu;
    double psi_r = 0.0;
    for (std::size_t i = 0; i < spec.n_up(); ++i) {
      psi_r -= rt[t].up_cap_duals[i] * spec.up_caps[i];
    }
    for (std::size_t j = 0; j < spec.n_down(); ++j) {
      psi_r -= rt[t].down_cap_duals[j] * spec.down_caps[j];
    }
    b.psi_real_time[t] = psi_r;
    dual_side += -da.lambda[t] * y_tilde[t] - rt[t].nu * (y[t] - y_tilde[t]) +
                 psi_r;
    primal += rt[t].cost;
  }
  if (std::fabs(dual_side - primal) >
      kIdentityTol * (1.0 + std::fabs(primal))) {
    throw IdentityViolation(
        "dual decomposition: reconstructed cost " + std::to_string(dual_side) +
        " vs primal " + std::to_string(primal));
  }
  return b;
}

}  // namespace vof::market
