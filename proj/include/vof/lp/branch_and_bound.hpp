#pragma once

#include <vector>

#include "vof/lp/simplex.hpp"

namespace vof::lp {

struct BnbOptions {
  double int_tol = 1e-6;     // |x - round(x)| below this counts as integral
  long node_budget = 100000;
  SimplexOptions lp;
};

// status semantics: Optimal means an incumbent exists and the tree closed
// (gap 0 up to tolerances); Infeasible means no integer-feasible point exists.
// If the node budget runs out, budget_exhausted is set and the best incumbent
// plus the proven bound are still returned; when that happens with no
// incumbent at all, the Infeasible verdict only covers the explored subtree.
struct MilpSolution {
  SolveStatus status = SolveStatus::Optimal;
  LpSolution incumbent;
  double relaxation_bound = 0.0;  // root LP objective
  double best_bound = 0.0;        // proven lower bound on the optimum
  double gap = 0.0;               // incumbent objective - best_bound, >= 0
  long nodes = 0;
  bool budget_exhausted = false;
};

// Depth-first branch and bound with best-bound backtracking; branches on the
// most fractional integer variable by tightening its bounds to floor/ceil.
MilpSolution solve_milp(const LinearProgram& lp,
                        const std::vector<std::size_t>& integer_vars,
                        const BnbOptions& opts = {});

}  // namespace vof::lp
