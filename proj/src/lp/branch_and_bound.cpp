#include "vof/lp/branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace vof::lp {
namespace {

struct Node {
  // Bound tightenings relative to the root problem: (var, lo, hi).
  std::vector<std::pair<std::size_t, std::pair<double, double>>> fixes;
  double parent_bound;  // LP objective of the node that spawned this one
};

void apply_fixes(LinearProgram& lp, const Node& node) {
  for (const auto& [var, bb] : node.fixes) lp.set_bounds(var, bb.first, bb.second);
}

void undo_fixes(LinearProgram& lp, const Node& node,
                const std::vector<double>& lo0, const std::vector<double>& hi0) {
  for (const auto& [var, bb] : node.fixes) lp.set_bounds(var, lo0[var], hi0[var]);
}

}  // namespace

MilpSolution solve_milp(const LinearProgram& lp_in,
                        const std::vector<std::size_t>& integer_vars,
                        const BnbOptions& opts) {
  for (std::size_t v : integer_vars) {
    if (v >= lp_in.num_vars()) {
      throw MalformedProblem("integer variable index " + std::to_string(v) +
                             " out of range");
    }
  }
  LinearProgram lp = lp_in;  // bounds are mutated per node and restored
  const std::vector<double> lo0 = lp.lower();
  const std::vector<double> hi0 = lp.upper();

  MilpSolution out;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  bool have_incumbent = false;
  bool have_root = false;

  std::vector<Node> open;
  open.push_back(Node{{}, -std::numeric_limits<double>::infinity()});

  while (!open.empty()) {
    if (out.nodes >= opts.node_budget) {
      out.budget_exhausted = true;
      break;
    }
    // Depth-first: newest node, except on backtracks (handled below by
    // pulling the best-bound node to the back once a dive ends).
    Node node = std::move(open.back());
    open.pop_back();
    ++out.nodes;

    if (have_incumbent &&
        node.parent_bound >= incumbent_obj - 1e-9 * (1.0 + std::fabs(incumbent_obj))) {
      continue;  // cannot beat the incumbent
    }

    apply_fixes(lp, node);
    LpSolution rel;
    try {
      rel = solve_lp(lp, opts.lp);
    } catch (const NumericalFailure&) {
      undo_fixes(lp, node, lo0, hi0);
      throw;
    }
    undo_fixes(lp, node, lo0, hi0);

    if (!have_root) {
      have_root = true;
      if (rel.status == SolveStatus::Unbounded) {
        out.status = SolveStatus::Unbounded;
        return out;
      }
      out.relaxation_bound =
          rel.status == SolveStatus::Optimal ? rel.objective : 0.0;
    }
    if (rel.status != SolveStatus::Optimal) continue;  // pruned by infeasibility
    if (have_incumbent &&
        rel.objective >= incumbent_obj - 1e-9 * (1.0 + std::fabs(incumbent_obj))) {
      continue;  // pruned by bound
    }

    // Most fractional integer variable, if any.
    std::size_t branch_var = 0;
    double best_frac = opts.int_tol;
    bool fractional = false;
    for (std::size_t v : integer_vars) {
      const double f = rel.x[v] - std::floor(rel.x[v]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > best_frac) {
        best_frac = dist;
        branch_var = v;
        fractional = true;
      }
    }

    if (!fractional) {
      incumbent_obj = rel.objective;
      have_incumbent = true;
      out.incumbent = std::move(rel);
      // A dive just closed; resume from the most promising open node.
      if (!open.empty()) {
        auto best = std::min_element(
            open.begin(), open.end(),
            [](const Node& a, const Node& b) { return a.parent_bound < b.parent_bound; });
        std::iter_swap(best, std::prev(open.end()));
      }
      continue;
    }

    const double v = rel.x[branch_var];
    const double fl = std::floor(v), ce = std::ceil(v);
    // Branch against the bounds in force at this node, not the root's, so
    // repeated branching on one variable keeps narrowing it.
    double lo_cur = lo0[branch_var], hi_cur = hi0[branch_var];
    for (const auto& [var, bb] : node.fixes) {
      if (var == branch_var) {
        lo_cur = bb.first;
        hi_cur = bb.second;
      }
    }
    // A child whose range comes up empty is infeasible; drop it here rather
    // than handing the solver inverted bounds.
    std::vector<Node> children;
    if (fl >= lo_cur) {
      Node down{node.fixes, rel.objective};
      down.fixes.emplace_back(branch_var, std::make_pair(lo_cur, fl));
      children.push_back(std::move(down));
    }
    if (ce <= hi_cur) {
      Node up{node.fixes, rel.objective};
      up.fixes.emplace_back(branch_var, std::make_pair(ce, hi_cur));
      children.push_back(std::move(up));
    }
    // Dive toward the nearer integer first (pushed last, popped first).
    const bool down_first = v - fl <= ce - v;
    if (children.size() == 2) {
      open.push_back(std::move(children[down_first ? 1 : 0]));
      open.push_back(std::move(children[down_first ? 0 : 1]));
    } else {
      for (auto& c : children) open.push_back(std::move(c));
    }
  }

  if (!have_incumbent) {
    out.status = SolveStatus::Infeasible;
    out.best_bound = out.relaxation_bound;
    return out;
  }
  out.status = SolveStatus::Optimal;
  double open_bound = std::numeric_limits<double>::infinity();
  for (const Node& nd : open) open_bound = std::min(open_bound, nd.parent_bound);
  out.best_bound = std::min(incumbent_obj, open.empty() ? incumbent_obj : open_bound);
  out.gap = std::max(0.0, incumbent_obj - out.best_bound);
  return out;
}

}  // namespace vof::lp
