#pragma once

#include "vof/lp/problem.hpp"

namespace vof::lp {

struct SimplexOptions {
  double feas_tol = 1e-9;    // bound/row feasibility slack
  double opt_tol = 1e-9;     // reduced-cost threshold for entering variables
  double pivot_tol = 1e-10;  // smallest acceptable pivot magnitude
  long max_iters = 0;        // 0 picks 500 + 40 * (rows + vars)
  int refactor_every = 64;   // eta updates between LU refactorizations
  int degen_threshold = 60;  // consecutive degenerate pivots before Bland mode
};

// Two-phase bounded-variable revised simplex. Exact rational arithmetic is not
// used; optimality is certified a posteriori (see certificates.hpp) to the
// tolerances above. Throws NumericalFailure if the iteration cap is hit or the
// basis cannot be refactorized.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace vof::lp
