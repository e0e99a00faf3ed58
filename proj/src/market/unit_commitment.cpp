#include "vof/market/unit_commitment.hpp"

#include <string>

namespace vof::market {
namespace {

void check_inputs(const MarketSpec& spec, const std::vector<double>& y_tilde,
                  const std::vector<double>& load) {
  spec.validate();
  if (spec.commit_costs.size() != spec.n_gen()) {
    throw lp::MalformedProblem("uc: spec carries no start-up costs");
  }
  const std::size_t T = spec.horizon;
  if (y_tilde.size() != T || load.size() != T) {
    throw lp::MalformedProblem("uc: forecast/load length != horizon");
  }
  const double cap = spec.total_gen_cap();
  for (std::size_t t = 0; t < T; ++t) {
    if (!(load[t] > 0.0)) {
      throw lp::MalformedProblem("uc: load must be positive at hour " +
                                 std::to_string(t));
    }
    if (y_tilde[t] < 0.0 || y_tilde[t] > spec.wind_cap) {
      throw lp::MalformedProblem("uc: forecast outside [0, wind cap] at hour " +
                                 std::to_string(t));
    }
    if (y_tilde[t] > load[t]) {
      throw InfeasibleByConstruction("uc: forecast exceeds load at hour " +
                                     std::to_string(t));
    }
    if (load[t] - y_tilde[t] > cap) {
      throw InfeasibleByConstruction(
          "uc: residual load exceeds thermal capacity at hour " +
          std::to_string(t));
    }
  }
}

}  // namespace

UcProblem build_uc(const MarketSpec& spec, const std::vector<double>& y_tilde,
                   const std::vector<double>& load) {
  check_inputs(spec, y_tilde, load);
  const std::size_t T = spec.horizon, G = spec.n_gen();
  UcProblem p{lp::LinearProgram(2 * T * G), {}, 0, T * G};
  lp::LinearProgram& lp = p.lp;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      const std::size_t x = p.x_offset + t * G + g;
      const std::size_t u = p.u_offset + t * G + g;
      lp.objective()[x] = spec.gen_costs[g];
      lp.set_bounds(x, 0.0, spec.gen_caps[g]);
      lp.objective()[u] = spec.commit_costs[g];
      lp.set_bounds(u, 0.0, 1.0);
      p.binaries.push_back(u);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    double* row = lp.add_eq_row(load[t] - y_tilde[t]);
    for (std::size_t g = 0; g < G; ++g) row[p.x_offset + t * G + g] = 1.0;
  }
  // Commitment gates the box: x - cap*u <= 0.
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      double* row = lp.add_ub_row(0.0);
      row[p.x_offset + t * G + g] = 1.0;
      row[p.u_offset + t * G + g] = -spec.gen_caps[g];
    }
  }
  // Ramps gated by the committed state of the hour being ramped into (up)
  // or out of (down): x[t+1]-x[t] <= r*u[t+1], x[t]-x[t+1] <= r*u[t].
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      double* row = lp.add_ub_row(0.0);
      row[p.x_offset + (t + 1) * G + g] = 1.0;
      row[p.x_offset + t * G + g] = -1.0;
      row[p.u_offset + (t + 1) * G + g] = -spec.gen_ramps[g];
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      double* row = lp.add_ub_row(0.0);
      row[p.x_offset + t * G + g] = 1.0;
      row[p.x_offset + (t + 1) * G + g] = -1.0;
      row[p.u_offset + t * G + g] = -spec.gen_ramps[g];
    }
  }
  return p;
}

lp::LinearProgram build_relaxed_uc(const MarketSpec& spec,
                                   const std::vector<double>& y_tilde,
                                   const std::vector<double>& load) {
  // Identical constraint set; integrality lives in the binary index list,
  // which the relaxation simply drops.
  return build_uc(spec, y_tilde, load).lp;
}

}  // namespace vof::market
