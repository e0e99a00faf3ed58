#include "vof/market/stochastic.hpp"

#include <cmath>
#include <string>

#include "vof/lp/simplex.hpp"

namespace vof::market {
namespace {

// Variable layout: x (T*G), then ytilde (T), then per scenario zup/zdn.
struct Layout {
  std::size_t T, G, U, D, S;
  std::size_t y_off, z_off, per_scen;
  std::size_t x(std::size_t t, std::size_t g) const { return t * G + g; }
  std::size_t y(std::size_t t) const { return y_off + t; }
  std::size_t zup(std::size_t s, std::size_t t, std::size_t i) const {
    return z_off + s * per_scen + t * (U + D) + i;
  }
  std::size_t zdn(std::size_t s, std::size_t t, std::size_t j) const {
    return z_off + s * per_scen + t * (U + D) + U + j;
  }
  std::size_t num_vars() const { return z_off + S * per_scen; }
};

Layout make_layout(const MarketSpec& spec, std::size_t S) {
  Layout L;
  L.T = spec.horizon;
  L.G = spec.n_gen();
  L.U = spec.n_up();
  L.D = spec.n_down();
  L.S = S;
  L.y_off = L.T * L.G;
  L.z_off = L.y_off + L.T;
  L.per_scen = L.T * (L.U + L.D);
  return L;
}

}  // namespace

lp::LinearProgram build_stochastic(const MarketSpec& spec,
                                   const std::vector<double>& load,
                                   const Matrix& scenarios,
                                   const std::vector<double>& probs) {
  spec.validate();
  const std::size_t T = spec.horizon, S = scenarios.rows();
  if (S < 1 || scenarios.cols() != T || probs.size() != S ||
      load.size() != T) {
    throw lp::MalformedProblem("stochastic: scenario/prob/load shape mismatch");
  }
  double psum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw lp::MalformedProblem("stochastic: negative probability");
    psum += p;
  }
  if (std::fabs(psum - 1.0) > 1e-9) {
    throw lp::MalformedProblem("stochastic: probabilities sum to " +
                               std::to_string(psum));
  }
  const Layout L = make_layout(spec, S);
  const std::size_t rows = T + S * T + 2 * (T > 0 ? T - 1 : 0) * L.G;
  if (L.num_vars() > 5000 || rows > 10000) {
    throw ScaleExceeded("stochastic: extensive form needs " +
                        std::to_string(L.num_vars()) + " vars / " +
                        std::to_string(rows) + " rows; reduce scenarios");
  }

  lp::LinearProgram lp(L.num_vars());
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < L.G; ++g) {
      lp.objective()[L.x(t, g)] = spec.gen_costs[g];
      lp.set_bounds(L.x(t, g), 0.0, spec.gen_caps[g]);
    }
    lp.set_bounds(L.y(t), 0.0, spec.wind_cap);
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < L.U; ++i) {
        lp.objective()[L.zup(s, t, i)] = probs[s] * spec.up_costs[i];
        lp.set_bounds(L.zup(s, t, i), 0.0, spec.up_caps[i]);
      }
      for (std::size_t j = 0; j < L.D; ++j) {
        lp.objective()[L.zdn(s, t, j)] = -probs[s] * spec.down_costs[j];
        lp.set_bounds(L.zdn(s, t, j), 0.0, spec.down_caps[j]);
      }
    }
  }
  // First-stage balance: sum_g x + ytilde = load.
  for (std::size_t t = 0; t < T; ++t) {
    double* row = lp.add_eq_row(load[t]);
    for (std::size_t g = 0; g < L.G; ++g) row[L.x(t, g)] = 1.0;
    row[L.y(t)] = 1.0;
  }
  // Recourse balance per scenario-hour: sum zup - sum zdn - ytilde = -y_s.
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      double* row = lp.add_eq_row(-scenarios(s, t));
      for (std::size_t i = 0; i < L.U; ++i) row[L.zup(s, t, i)] = 1.0;
      for (std::size_t j = 0; j < L.D; ++j) row[L.zdn(s, t, j)] = -1.0;
      row[L.y(t)] = -1.0;
    }
  }
  // First-stage ramps, same shape as the deterministic day-ahead problem.
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < L.G; ++g) {
      double* row = lp.add_ub_row(spec.gen_ramps[g]);
      row[L.x(t + 1, g)] = 1.0;
      row[L.x(t, g)] = -1.0;
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < L.G; ++g) {
      double* row = lp.add_ub_row(spec.gen_ramps[g]);
      row[L.x(t, g)] = 1.0;
      row[L.x(t + 1, g)] = -1.0;
    }
  }
  return lp;
}

StochasticResult solve_stochastic(const MarketSpec& spec,
                                  const std::vector<double>& load,
                                  const Matrix& scenarios,
                                  const std::vector<double>& probs) {
  const lp::LinearProgram lp = build_stochastic(spec, load, scenarios, probs);
  const lp::LpSolution sol = lp::solve_lp(lp);
  if (sol.status == lp::SolveStatus::Infeasible) {
    throw InfeasibleByConstruction(
        "stochastic: a scenario deviation exceeds flexible capacity");
  }
  if (sol.status != lp::SolveStatus::Optimal) {
    throw lp::NumericalFailure("stochastic: unexpected unbounded program");
  }
  const Layout L = make_layout(spec, scenarios.rows());
  StochasticResult r;
  r.expected_cost = sol.objective;
  r.schedule = Matrix(L.T, L.G);
  for (std::size_t t = 0; t < L.T; ++t) {
    for (std::size_t g = 0; g < L.G; ++g) {
      r.schedule(t, g) = sol.x[L.x(t, g)];
    }
  }
  r.y_tilde.resize(L.T);
  for (std::size_t t = 0; t < L.T; ++t) r.y_tilde[t] = sol.x[L.y(t)];
  // First-stage balance rows were added first, one per hour.
  r.lambda.assign(sol.eq_duals.begin(), sol.eq_duals.begin() + L.T);
  return r;
}

}  // namespace vof::market
