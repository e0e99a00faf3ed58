#pragma once

#include <vector>

#include "vof/lp/problem.hpp"
#include "vof/market/spec.hpp"

namespace vof::market {

// Commitment-gated dispatch: on/off u[t,g] with start-up costs, capacity
// x <= cap*u and ramp limits gated by the committed state.
struct UcProblem {
  lp::LinearProgram lp;
  std::vector<std::size_t> binaries;  // indices of the u variables
  std::size_t x_offset = 0;           // x[t,g] at x_offset + t*n_gen + g
  std::size_t u_offset = 0;           // u[t,g] likewise
};

UcProblem build_uc(const MarketSpec& spec, const std::vector<double>& y_tilde,
                   const std::vector<double>& load);

// Same constraint set with u relaxed to [0, 1]; this is the LP handed to
// value-oriented training when the day-ahead stage is a commitment problem.
lp::LinearProgram build_relaxed_uc(const MarketSpec& spec,
                                   const std::vector<double>& y_tilde,
                                   const std::vector<double>& load);

}  // namespace vof::market
