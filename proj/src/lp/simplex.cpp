#include "vof/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "vof/simd/kernels.hpp"

namespace vof::lp {
namespace {

constexpr double kTinyPivot = 1e-12;

// Dense LU with partial pivoting for the basis matrix. Column-major so that
// both elimination and the triangular solves run down contiguous columns.
class LuFactor {
 public:
  bool factor(std::vector<double> a, int m) {
    m_ = m;
    lu_ = std::move(a);
    perm_.resize(m);
    double* d = lu_.data();
    for (int k = 0; k < m; ++k) {
      double* colk = d + static_cast<std::size_t>(k) * m;
      int p = k + static_cast<int>(simd::argmax_abs(colk + k, m - k));
      if (std::fabs(colk[p]) < kTinyPivot) return false;
      perm_[k] = p;
      if (p != k) {
        for (int j = 0; j < m; ++j) {
          std::swap(d[static_cast<std::size_t>(j) * m + k],
                    d[static_cast<std::size_t>(j) * m + p]);
        }
      }
      const double inv = 1.0 / colk[k];
      for (int i = k + 1; i < m; ++i) colk[i] *= inv;
      for (int j = k + 1; j < m; ++j) {
        double* colj = d + static_cast<std::size_t>(j) * m;
        if (colj[k] != 0.0) {
          simd::axpy(-colj[k], colk + k + 1, colj + k + 1, m - 1 - k);
        }
      }
    }
    return true;
  }

  // B v = rhs, solved in place.
  void solve(double* v) const {
    const double* d = lu_.data();
    for (int k = 0; k < m_; ++k) {
      if (perm_[k] != k) std::swap(v[k], v[perm_[k]]);
    }
    for (int k = 0; k < m_ - 1; ++k) {
      const double* colk = d + static_cast<std::size_t>(k) * m_;
      if (v[k] != 0.0) simd::axpy(-v[k], colk + k + 1, v + k + 1, m_ - 1 - k);
    }
    for (int k = m_ - 1; k >= 0; --k) {
      const double* colk = d + static_cast<std::size_t>(k) * m_;
      v[k] /= colk[k];
      if (k > 0 && v[k] != 0.0) simd::axpy(-v[k], colk, v, k);
    }
  }

  // B' v = rhs, solved in place.
  void solve_transposed(double* v) const {
    const double* d = lu_.data();
    for (int k = 0; k < m_; ++k) {
      const double* colk = d + static_cast<std::size_t>(k) * m_;
      v[k] = (v[k] - simd::dot(colk, v, k)) / colk[k];
    }
    for (int k = m_ - 1; k >= 0; --k) {
      const double* colk = d + static_cast<std::size_t>(k) * m_;
      v[k] -= simd::dot(colk + k + 1, v + k + 1, m_ - 1 - k);
    }
    for (int k = m_ - 1; k >= 0; --k) {
      if (perm_[k] != k) std::swap(v[k], v[perm_[k]]);
    }
  }

 private:
  int m_ = 0;
  std::vector<double> lu_;
  std::vector<int> perm_;
};

// Product-form update: basis column at `pos` was replaced, w = B_old^-1 a_in.
struct Eta {
  int pos;
  std::vector<double> w;
};

enum VarStat : int8_t { kAtLower, kAtUpper, kFree, kBasic };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts)
      : lp_(lp), opts_(opts) {
    n_ = static_cast<int>(lp.num_vars());
    meq_ = static_cast<int>(lp.num_eq());
    mub_ = static_cast<int>(lp.num_ub());
    M_ = meq_ + mub_;
    ncols_ = n_ + mub_ + M_;
    if (opts_.max_iters <= 0) opts_.max_iters = 500 + 40L * (M_ + n_);
    build_columns();
    init_bounds_and_costs();
  }

  LpSolution run() {
    init_basis();
    refactor();
    for (;;) {
      if (++iters_ > opts_.max_iters) {
        throw NumericalFailure("simplex: iteration cap " +
                               std::to_string(opts_.max_iters) +
                               " hit (phase " + std::to_string(phase_) + ")");
      }
      const int q = price();
      if (q < 0) {
        if (phase_ == 1) {
          if (!finish_phase_one()) return verdict(SolveStatus::Infeasible);
          continue;
        }
        return extract();
      }
      if (!step(q)) return verdict(SolveStatus::Unbounded);
    }
  }

 private:
  // ---- setup ----

  void build_columns() {
    // Structural columns, column-major: rows [0,meq) are equalities, then ub.
    acol_.assign(static_cast<std::size_t>(M_) * n_, 0.0);
    for (int i = 0; i < meq_; ++i) {
      const double* row = lp_.eq_row(i);
      for (int j = 0; j < n_; ++j) acol_[static_cast<std::size_t>(j) * M_ + i] = row[j];
    }
    for (int k = 0; k < mub_; ++k) {
      const double* row = lp_.ub_row(k);
      for (int j = 0; j < n_; ++j) {
        acol_[static_cast<std::size_t>(j) * M_ + meq_ + k] = row[j];
      }
    }
    rhs_full_.resize(M_);
    for (int i = 0; i < meq_; ++i) rhs_full_[i] = lp_.eq_rhs(i);
    for (int k = 0; k < mub_; ++k) rhs_full_[meq_ + k] = lp_.ub_rhs(k);
  }

  void init_bounds_and_costs() {
    lb_.assign(ncols_, 0.0);
    ub_.assign(ncols_, kInf);
    std::copy(lp_.lower().begin(), lp_.lower().end(), lb_.begin());
    std::copy(lp_.upper().begin(), lp_.upper().end(), ub_.begin());
    // Slacks keep [0, inf); artificial bounds are set in init_basis.
    real_cost_.assign(ncols_, 0.0);
    std::copy(lp_.objective().begin(), lp_.objective().end(), real_cost_.begin());
    cost_.assign(ncols_, 0.0);  // phase-1 costs filled in init_basis
    art_sign_.assign(M_, 1.0);
  }

  int slack_var(int k) const { return n_ + k; }
  int art_var(int i) const { return n_ + mub_ + i; }
  bool is_artificial(int j) const { return j >= n_ + mub_; }

  void init_basis() {
    stat_.assign(ncols_, kAtLower);
    xval_.assign(ncols_, 0.0);
    basic_.assign(M_, -1);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lb_[j])) {
        stat_[j] = kAtLower;
        xval_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        stat_[j] = kAtUpper;
        xval_[j] = ub_[j];
      } else {
        stat_[j] = kFree;
        xval_[j] = 0.0;
      }
    }
    // Row activity of the nonbasic point decides who starts basic.
    std::vector<double> resid = rhs_full_;
    for (int j = 0; j < n_; ++j) {
      if (xval_[j] != 0.0) {
        simd::axpy(-xval_[j], acol_.data() + static_cast<std::size_t>(j) * M_,
                   resid.data(), M_);
      }
    }
    for (int i = 0; i < M_; ++i) {
      const int a = art_var(i);
      const bool ub_row = i >= meq_;
      if (ub_row && resid[i] >= 0.0) {
        // Feasible slack start; this row never needs its artificial.
        const int s = slack_var(i - meq_);
        basic_[i] = s;
        stat_[s] = kBasic;
        xval_[s] = resid[i];
        lb_[a] = ub_[a] = 0.0;
        cost_[a] = 0.0;
      } else {
        art_sign_[i] = resid[i] < 0.0 ? -1.0 : 1.0;
        basic_[i] = a;
        stat_[a] = kBasic;
        xval_[a] = std::fabs(resid[i]);
        lb_[a] = 0.0;
        ub_[a] = kInf;
        cost_[a] = 1.0;
      }
    }
  }

  // ---- linear algebra plumbing ----

  void fetch_column(int j, double* out) const {
    std::memset(out, 0, sizeof(double) * M_);
    if (j < n_) {
      std::memcpy(out, acol_.data() + static_cast<std::size_t>(j) * M_,
                  sizeof(double) * M_);
    } else if (j < n_ + mub_) {
      out[meq_ + (j - n_)] = 1.0;
    } else {
      const int i = j - n_ - mub_;
      out[i] = art_sign_[i];
    }
  }

  double col_dot(int j, const double* v) const {
    if (j < n_) {
      return simd::dot(acol_.data() + static_cast<std::size_t>(j) * M_, v, M_);
    }
    if (j < n_ + mub_) return v[meq_ + (j - n_)];
    const int i = j - n_ - mub_;
    return art_sign_[i] * v[i];
  }

  void ftran(double* v) const {
    lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = v[e.pos] / e.w[e.pos];
      if (t != 0.0) simd::axpy(-t, e.w.data(), v, M_);
      v[e.pos] = t;
    }
  }

  void btran(double* v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const double d = simd::dot(it->w.data(), v, M_);
      v[it->pos] = (v[it->pos] - (d - it->w[it->pos] * v[it->pos])) /
                   it->w[it->pos];
    }
    lu_.solve_transposed(v);
  }

  void refactor() {
    std::vector<double> bmat(static_cast<std::size_t>(M_) * M_, 0.0);
    for (int p = 0; p < M_; ++p) {
      fetch_column(basic_[p], bmat.data() + static_cast<std::size_t>(p) * M_);
    }
    if (!lu_.factor(std::move(bmat), M_)) {
      throw NumericalFailure("simplex: singular basis at refactorization");
    }
    etas_.clear();
    recompute_basic_values();
  }

  void recompute_basic_values() {
    std::vector<double> r = rhs_full_;
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == kBasic || xval_[j] == 0.0) continue;
      if (j < n_) {
        simd::axpy(-xval_[j], acol_.data() + static_cast<std::size_t>(j) * M_,
                   r.data(), M_);
      } else if (j < n_ + mub_) {
        r[meq_ + (j - n_)] -= xval_[j];
      } else {
        const int i = j - n_ - mub_;
        r[i] -= art_sign_[i] * xval_[j];
      }
    }
    ftran(r.data());
    for (int p = 0; p < M_; ++p) xval_[basic_[p]] = r[p];
  }

  // ---- pricing ----

  // Returns the entering variable, or -1 when the current phase is optimal.
  int price() {
    y_.resize(M_);
    for (int p = 0; p < M_; ++p) y_[p] = cost_[basic_[p]];
    btran(y_.data());
    int best = -1;
    double best_viol = opts_.opt_tol;
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == kBasic || lb_[j] == ub_[j]) continue;
      const double d = cost_[j] - col_dot(j, y_.data());
      double viol;
      switch (stat_[j]) {
        case kAtLower: viol = -d; break;
        case kAtUpper: viol = d; break;
        default: viol = std::fabs(d); break;
      }
      if (viol > best_viol) {
        best = j;
        best_viol = viol;
        entering_d_ = d;
        if (bland_) break;  // first improving index is enough
      }
    }
    return best;
  }

  // ---- ratio test and pivot ----

  // Returns false on an unbounded ray (phase 2).
  bool step(int q) {
    const double dir =
        (stat_[q] == kAtLower || (stat_[q] == kFree && entering_d_ < 0.0))
            ? 1.0
            : -1.0;
    w_.resize(M_);
    fetch_column(q, w_.data());
    ftran(w_.data());

    const double t_flip = ub_[q] - lb_[q];  // inf when a bound is missing
    // Pass 1: shortest step with bounds relaxed by feas_tol.
    double t_limit = kInf;
    for (int i = 0; i < M_; ++i) {
      const double delta = dir * w_[i];
      const double xb = xval_[basic_[i]];
      if (delta > opts_.pivot_tol) {
        const double lo = lb_[basic_[i]];
        if (std::isfinite(lo)) {
          t_limit = std::min(t_limit, (xb - lo + opts_.feas_tol) / delta);
        }
      } else if (delta < -opts_.pivot_tol) {
        const double hi = ub_[basic_[i]];
        if (std::isfinite(hi)) {
          t_limit = std::min(t_limit, (xb - hi - opts_.feas_tol) / delta);
        }
      }
    }
    // Pass 2: among blockers within the relaxed limit, take the biggest pivot.
    int blocker = -1;
    double t_exact = kInf;
    double best_mag = 0.0;
    for (int i = 0; i < M_; ++i) {
      const double delta = dir * w_[i];
      const double xb = xval_[basic_[i]];
      double t;
      if (delta > opts_.pivot_tol) {
        const double lo = lb_[basic_[i]];
        if (!std::isfinite(lo)) continue;
        t = (xb - lo) / delta;
      } else if (delta < -opts_.pivot_tol) {
        const double hi = ub_[basic_[i]];
        if (!std::isfinite(hi)) continue;
        t = (xb - hi) / delta;
      } else {
        continue;
      }
      if (t <= t_limit && std::fabs(delta) > best_mag) {
        blocker = i;
        t_exact = t;
        best_mag = std::fabs(delta);
      }
    }

    if (blocker < 0 && !std::isfinite(t_flip)) {
      if (phase_ == 1) {
        throw NumericalFailure("simplex: unbounded ray in feasibility phase");
      }
      return false;
    }

    if (blocker < 0 || t_flip <= std::max(t_exact, 0.0)) {
      // Bound flip: the entering variable crosses to its other bound.
      for (int i = 0; i < M_; ++i) {
        xval_[basic_[i]] -= dir * t_flip * w_[i];
      }
      if (stat_[q] == kAtLower) {
        stat_[q] = kAtUpper;
        xval_[q] = ub_[q];
      } else {
        stat_[q] = kAtLower;
        xval_[q] = lb_[q];
      }
      note_step_length(t_flip);
      return true;
    }

    const double t = std::max(t_exact, 0.0);
    const int leaver = basic_[blocker];
    for (int i = 0; i < M_; ++i) xval_[basic_[i]] -= dir * t * w_[i];
    xval_[q] += dir * t;
    const double delta_p = dir * w_[blocker];
    if (delta_p > 0.0) {
      stat_[leaver] = kAtLower;
      xval_[leaver] = lb_[leaver];
    } else {
      stat_[leaver] = kAtUpper;
      xval_[leaver] = ub_[leaver];
    }
    if (phase_ == 1 && is_artificial(leaver)) {
      // Once out, an artificial stays out.
      lb_[leaver] = ub_[leaver] = 0.0;
      stat_[leaver] = kAtLower;
      xval_[leaver] = 0.0;
    }
    stat_[q] = kBasic;
    basic_[blocker] = q;
    etas_.push_back(Eta{blocker, w_});
    if (static_cast<int>(etas_.size()) >= opts_.refactor_every) refactor();
    note_step_length(t);
    return true;
  }

  void note_step_length(double t) {
    if (t <= 1e-11) {
      if (++degen_run_ > opts_.degen_threshold) bland_ = true;
    } else {
      degen_run_ = 0;
      bland_ = false;
    }
  }

  // ---- phase handling and extraction ----

  bool finish_phase_one() {
    double infeas = 0.0;
    for (int i = 0; i < M_; ++i) infeas += std::fabs(xval_[art_var(i)]);
    double bscale = 0.0;
    for (double b : rhs_full_) bscale = std::max(bscale, std::fabs(b));
    if (infeas > 1e-7 * (1.0 + bscale)) return false;
    for (int i = 0; i < M_; ++i) {
      const int a = art_var(i);
      lb_[a] = ub_[a] = 0.0;
      if (stat_[a] != kBasic) {
        stat_[a] = kAtLower;
        xval_[a] = 0.0;
      }
      // Basic artificials sit at ~0; the ratio test pins them there and any
      // later pivot through their row drives them out for good.
    }
    cost_ = real_cost_;
    phase_ = 2;
    degen_run_ = 0;
    bland_ = false;
    return true;
  }

  LpSolution verdict(SolveStatus st) const {
    LpSolution s;
    s.status = st;
    s.iterations = iters_;
    return s;
  }

  LpSolution extract() {
    LpSolution s;
    s.status = SolveStatus::Optimal;
    s.iterations = iters_;
    s.x.assign(xval_.begin(), xval_.begin() + n_);
    s.objective = simd::dot(real_cost_.data(), xval_.data(), n_);
    y_.resize(M_);
    for (int p = 0; p < M_; ++p) y_[p] = real_cost_[basic_[p]];
    btran(y_.data());
    s.eq_duals.assign(y_.begin(), y_.begin() + meq_);
    s.ub_duals.resize(mub_);
    for (int k = 0; k < mub_; ++k) s.ub_duals[k] = -y_[meq_ + k];
    s.lower_duals.assign(n_, 0.0);
    s.upper_duals.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (stat_[j] == kBasic) continue;
      const double d = real_cost_[j] - col_dot(j, y_.data());
      if (lb_[j] == ub_[j]) {
        s.lower_duals[j] = std::max(d, 0.0);
        s.upper_duals[j] = std::max(-d, 0.0);
      } else if (stat_[j] == kAtLower) {
        s.lower_duals[j] = d;
      } else if (stat_[j] == kAtUpper) {
        s.upper_duals[j] = -d;
      }
    }
    return s;
  }

  const LinearProgram& lp_;
  SimplexOptions opts_;
  int n_ = 0, meq_ = 0, mub_ = 0, M_ = 0, ncols_ = 0;
  std::vector<double> acol_, rhs_full_;
  std::vector<double> cost_, real_cost_;
  std::vector<double> lb_, ub_, xval_, art_sign_;
  std::vector<int> basic_;
  std::vector<int8_t> stat_;
  std::vector<double> w_, y_;
  LuFactor lu_;
  std::vector<Eta> etas_;
  long iters_ = 0;
  int degen_run_ = 0;
  bool bland_ = false;
  int phase_ = 1;
  double entering_d_ = 0.0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  Simplex s(lp, opts);
  return s.run();
}

}  // namespace vof::lp
