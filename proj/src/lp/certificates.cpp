#include "vof/lp/certificates.hpp"

#include <algorithm>
#include <cmath>

namespace vof::lp {

double CertificateReport::worst() const {
  return std::max({primal_eq, primal_ub, primal_bounds, dual_stationarity,
                   dual_sign, complementarity, duality_gap});
}

bool CertificateReport::ok(double tol) const {
  const double prim = tol * (1.0 + rhs_scale);
  const double gapt = tol * (1.0 + obj_scale);
  return primal_eq <= prim && primal_ub <= prim && primal_bounds <= prim &&
         dual_stationarity <= gapt && dual_sign <= tol &&
         complementarity <= gapt && duality_gap <= gapt;
}

CertificateReport check_certificates(const LinearProgram& lp,
                                     const LpSolution& sol) {
  CertificateReport rep;
  const std::size_t n = lp.num_vars();
  const auto& x = sol.x;
  rep.obj_scale = std::fabs(sol.objective);

  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.num_eq(); ++i) {
    const double* row = lp.eq_row(i);
    double act = 0.0;
    for (std::size_t j = 0; j < n; ++j) act += row[j] * x[j];
    rep.primal_eq = std::max(rep.primal_eq, std::fabs(act - lp.eq_rhs(i)));
    rep.rhs_scale = std::max(rep.rhs_scale, std::fabs(lp.eq_rhs(i)));
    dual_obj += sol.eq_duals[i] * lp.eq_rhs(i);
  }
  for (std::size_t k = 0; k < lp.num_ub(); ++k) {
    const double* row = lp.ub_row(k);
    double act = 0.0;
    for (std::size_t j = 0; j < n; ++j) act += row[j] * x[j];
    const double slack = lp.ub_rhs(k) - act;
    rep.primal_ub = std::max(rep.primal_ub, -slack);
    rep.rhs_scale = std::max(rep.rhs_scale, std::fabs(lp.ub_rhs(k)));
    rep.dual_sign = std::max(rep.dual_sign, -sol.ub_duals[k]);
    rep.complementarity =
        std::max(rep.complementarity, std::fabs(sol.ub_duals[k] * slack));
    dual_obj -= sol.ub_duals[k] * lp.ub_rhs(k);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower()[j], hi = lp.upper()[j];
    if (std::isfinite(lo)) {
      rep.primal_bounds = std::max(rep.primal_bounds, lo - x[j]);
      rep.rhs_scale = std::max(rep.rhs_scale, std::fabs(lo));
      rep.complementarity = std::max(
          rep.complementarity, std::fabs(sol.lower_duals[j] * (x[j] - lo)));
      dual_obj += sol.lower_duals[j] * lo;
    }
    if (std::isfinite(hi)) {
      rep.primal_bounds = std::max(rep.primal_bounds, x[j] - hi);
      rep.rhs_scale = std::max(rep.rhs_scale, std::fabs(hi));
      rep.complementarity = std::max(
          rep.complementarity, std::fabs(sol.upper_duals[j] * (hi - x[j])));
      dual_obj -= sol.upper_duals[j] * hi;
    }
    rep.dual_sign = std::max(rep.dual_sign, -sol.lower_duals[j]);
    rep.dual_sign = std::max(rep.dual_sign, -sol.upper_duals[j]);
    // Stationarity: c - A_eq'y + A_ub'w - pl + pu = 0, columnwise.
    double r = lp.objective()[j] - sol.lower_duals[j] + sol.upper_duals[j];
    for (std::size_t i = 0; i < lp.num_eq(); ++i) {
      r -= sol.eq_duals[i] * lp.eq_row(i)[j];
    }
    for (std::size_t k = 0; k < lp.num_ub(); ++k) {
      r += sol.ub_duals[k] * lp.ub_row(k)[j];
    }
    rep.dual_stationarity = std::max(rep.dual_stationarity, std::fabs(r));
  }
  rep.duality_gap = std::fabs(sol.objective - dual_obj);
  return rep;
}

}  // namespace vof::lp
