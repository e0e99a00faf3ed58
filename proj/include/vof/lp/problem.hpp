#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vof::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Structurally invalid input: NaN coefficients, inverted bounds, bad indices.
struct MalformedProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The solver lost its numerical footing (singular basis after refactorization,
// iteration cap hit). Distinct from a clean Infeasible/Unbounded verdict.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// min c'v  s.t.  A_eq v = b_eq,  A_ub v <= b_ub,  lower <= v <= upper.
//
// Rows are stored dense. add_eq_row/add_ub_row append a zero-filled row and
// return a pointer to its coefficients; the pointer is valid only until the
// next row is added.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars)
      : num_vars_(num_vars),
        objective_(num_vars, 0.0),
        lower_(num_vars, 0.0),
        upper_(num_vars, kInf) {}

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_eq() const { return eq_rhs_.size(); }
  std::size_t num_ub() const { return ub_rhs_.size(); }

  std::vector<double>& objective() { return objective_; }
  const std::vector<double>& objective() const { return objective_; }

  void set_bounds(std::size_t var, double lo, double hi) {
    if (var >= num_vars_) {
      throw MalformedProblem("set_bounds: variable index " +
                             std::to_string(var) + " out of range");
    }
    lower_[var] = lo;
    upper_[var] = hi;
  }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  double* add_eq_row(double rhs) {
    eq_rhs_.push_back(rhs);
    eq_rows_.resize(eq_rows_.size() + num_vars_, 0.0);
    return eq_rows_.data() + (eq_rhs_.size() - 1) * num_vars_;
  }
  double* add_ub_row(double rhs) {
    ub_rhs_.push_back(rhs);
    ub_rows_.resize(ub_rows_.size() + num_vars_, 0.0);
    return ub_rows_.data() + (ub_rhs_.size() - 1) * num_vars_;
  }

  const double* eq_row(std::size_t i) const {
    return eq_rows_.data() + i * num_vars_;
  }
  const double* ub_row(std::size_t i) const {
    return ub_rows_.data() + i * num_vars_;
  }
  double eq_rhs(std::size_t i) const { return eq_rhs_[i]; }
  double ub_rhs(std::size_t i) const { return ub_rhs_[i]; }
  void set_eq_rhs(std::size_t i, double v) { eq_rhs_[i] = v; }
  void set_ub_rhs(std::size_t i, double v) { ub_rhs_[i] = v; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }
  const std::vector<double>& ub_rhs() const { return ub_rhs_; }

  // Throws MalformedProblem on NaN data or lower > upper.
  void validate() const;

 private:
  std::size_t num_vars_;
  std::vector<double> objective_;
  std::vector<double> lower_, upper_;
  std::vector<double> eq_rows_, ub_rows_;  // dense, row-major
  std::vector<double> eq_rhs_, ub_rhs_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SolveStatus s);

// Primal/dual pair returned by solve_lp. Dual sign conventions:
//   eq_duals[i]    = d(objective)/d(b_eq[i]), free sign
//   ub_duals[k]   >= 0, with objective = b_eq'y - b_ub'w + lower'pl - upper'pu
//   lower_duals   >= 0 (reduced cost of variables at their lower bound)
//   upper_duals   >= 0 (negated reduced cost of variables at their upper bound)
// Primal and dual vectors are empty unless status == Optimal.
struct LpSolution {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> eq_duals;
  std::vector<double> ub_duals;
  std::vector<double> lower_duals;
  std::vector<double> upper_duals;
  long iterations = 0;
};

}  // namespace vof::lp
