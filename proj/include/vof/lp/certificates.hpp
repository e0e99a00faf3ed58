#pragma once

#include "vof/lp/problem.hpp"

namespace vof::lp {

// Worst-case residuals of the KKT system for a claimed optimal pair.
struct CertificateReport {
  double primal_eq = 0.0;        // max |A_eq x - b_eq|
  double primal_ub = 0.0;        // max positive part of A_ub x - b_ub
  double primal_bounds = 0.0;    // max bound violation
  double dual_stationarity = 0.0;
  double dual_sign = 0.0;        // most negative multiplier, as a positive number
  double complementarity = 0.0;  // max |multiplier * slack|
  double duality_gap = 0.0;      // |primal obj - dual obj|
  double rhs_scale = 0.0;        // max |rhs| over all rows and finite bounds
  double obj_scale = 0.0;        // |primal objective|

  double worst() const;
  // All residuals within tol * (1 + scale of the matching quantity).
  bool ok(double tol) const;
};

// Checks an Optimal solution against its problem. Purely arithmetic; shares no
// state with the solver, so it can vouch for solver output independently.
CertificateReport check_certificates(const LinearProgram& lp,
                                     const LpSolution& sol);

}  // namespace vof::lp
