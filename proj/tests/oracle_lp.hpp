#pragma once

// Brute-force LP oracle for cross-checking the simplex solver on small
// instances. Enumerates every candidate vertex (each choice of n active
// constraints), solves the resulting linear system by Gaussian elimination
// and keeps the best feasible one. Infinite bounds are replaced by a large
// box; an optimum pinned to the box that keeps improving when the box grows
// is classified as unbounded. Deliberately shares nothing with the solver
// beyond the problem container.

#include <algorithm>
#include <cmath>
#include <vector>

#include "vof/lp/problem.hpp"

namespace vof::testing {

struct OracleResult {
  vof::lp::SolveStatus status = vof::lp::SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

namespace oracle_detail {

// Solves an n x n dense system in place. Returns false if singular.
inline bool gauss_solve(std::vector<double>& a, std::vector<double>& b,
                        std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(a[i * n + k]) > std::fabs(a[piv * n + k])) piv = i;
    }
    if (std::fabs(a[piv * n + k]) < 1e-10) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * b[j];
    b[k] = s / a[k * n + k];
  }
  return true;
}

struct BoxedBest {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
  bool on_box = false;  // some artificially boxed coordinate is at the box
};

inline BoxedBest best_vertex(const vof::lp::LinearProgram& lp, double box) {
  using vof::lp::kInf;
  const std::size_t n = lp.num_vars();
  const std::size_t meq = lp.num_eq();
  std::vector<double> lo(n), hi(n);
  std::vector<bool> lo_boxed(n, false), hi_boxed(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = lp.lower()[j];
    hi[j] = lp.upper()[j];
    if (lo[j] == -kInf) {
      lo[j] = -box;
      lo_boxed[j] = true;
    }
    if (hi[j] == kInf) {
      hi[j] = box;
      hi_boxed[j] = true;
    }
  }

  // Candidate rows beyond the equalities: each ub row, then each bound.
  struct Cand {
    std::vector<double> a;
    double b;
  };
  std::vector<Cand> cands;
  for (std::size_t k = 0; k < lp.num_ub(); ++k) {
    cands.push_back({std::vector<double>(lp.ub_row(k), lp.ub_row(k) + n),
                     lp.ub_rhs(k)});
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> unit(n, 0.0);
    unit[j] = 1.0;
    cands.push_back({unit, lo[j]});
    cands.push_back({unit, hi[j]});
  }

  BoxedBest best;
  if (meq > n) return best;  // over-determined systems are out of scope
  const std::size_t pick = n - meq;
  std::vector<std::size_t> idx(pick);
  for (std::size_t i = 0; i < pick; ++i) idx[i] = i;

  const auto try_vertex = [&](const std::vector<std::size_t>& sel) {
    std::vector<double> a(n * n), rhs(n);
    for (std::size_t i = 0; i < meq; ++i) {
      std::copy(lp.eq_row(i), lp.eq_row(i) + n, a.begin() + i * n);
      rhs[i] = lp.eq_rhs(i);
    }
    for (std::size_t i = 0; i < pick; ++i) {
      const Cand& c = cands[sel[i]];
      std::copy(c.a.begin(), c.a.end(), a.begin() + (meq + i) * n);
      rhs[meq + i] = c.b;
    }
    if (!gauss_solve(a, rhs, n)) return;
    const std::vector<double>& x = rhs;
    const double ftol = 1e-7;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] < lo[j] - ftol * (1.0 + std::fabs(lo[j]))) return;
      if (x[j] > hi[j] + ftol * (1.0 + std::fabs(hi[j]))) return;
    }
    for (std::size_t i = 0; i < meq; ++i) {
      double act = 0.0;
      for (std::size_t j = 0; j < n; ++j) act += lp.eq_row(i)[j] * x[j];
      if (std::fabs(act - lp.eq_rhs(i)) > ftol * (1.0 + std::fabs(lp.eq_rhs(i))))
        return;
    }
    for (std::size_t k = 0; k < lp.num_ub(); ++k) {
      double act = 0.0;
      for (std::size_t j = 0; j < n; ++j) act += lp.ub_row(k)[j] * x[j];
      if (act > lp.ub_rhs(k) + ftol * (1.0 + std::fabs(lp.ub_rhs(k)))) return;
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += lp.objective()[j] * x[j];
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.x = x;
      best.on_box = false;
      for (std::size_t j = 0; j < n; ++j) {
        if ((lo_boxed[j] && std::fabs(x[j] + box) < 1e-3 * box) ||
            (hi_boxed[j] && std::fabs(x[j] - box) < 1e-3 * box)) {
          best.on_box = true;
        }
      }
    }
  };

  if (pick == 0) {
    try_vertex({});
    return best;
  }
  for (;;) {
    try_vertex(idx);
    // next combination
    std::size_t i = pick;
    while (i-- > 0) {
      if (idx[i] + (pick - i) < cands.size()) {
        ++idx[i];
        for (std::size_t j = i + 1; j < pick; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
  }
}

}  // namespace oracle_detail

inline OracleResult lp_oracle(const vof::lp::LinearProgram& lp,
                              double box = 1e6) {
  using vof::lp::SolveStatus;
  OracleResult res;
  auto b1 = oracle_detail::best_vertex(lp, box);
  if (!b1.feasible) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  if (b1.on_box) {
    auto b2 = oracle_detail::best_vertex(lp, box * 16.0);
    if (b2.feasible &&
        b2.objective < b1.objective - 1e-6 * (1.0 + std::fabs(b1.objective))) {
      res.status = SolveStatus::Unbounded;
      return res;
    }
  }
  res.status = SolveStatus::Optimal;
  res.objective = b1.objective;
  res.x = std::move(b1.x);
  return res;
}

}  // namespace vof::testing
