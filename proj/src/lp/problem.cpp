#include "vof/lp/problem.hpp"

#include <cmath>
#include <string>

namespace vof::lp {

void LinearProgram::validate() const {
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (std::isnan(objective_[j])) {
      throw MalformedProblem("objective coefficient " + std::to_string(j) +
                             " is NaN");
    }
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j]) {
      throw MalformedProblem("variable " + std::to_string(j) +
                             " has invalid bounds [" +
                             std::to_string(lower_[j]) + ", " +
                             std::to_string(upper_[j]) + "]");
    }
    if (lower_[j] == kInf || upper_[j] == -kInf) {
      throw MalformedProblem("variable " + std::to_string(j) +
                             " has an infinite fixed bound");
    }
  }
  auto check_rows = [&](const std::vector<double>& rows,
                        const std::vector<double>& rhs, const char* kind) {
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (!std::isfinite(rhs[i])) {
        throw MalformedProblem(std::string(kind) + " row " + std::to_string(i) +
                               " has non-finite rhs");
      }
      const double* r = rows.data() + i * num_vars_;
      for (std::size_t j = 0; j < num_vars_; ++j) {
        if (!std::isfinite(r[j])) {
          throw MalformedProblem(std::string(kind) + " row " +
                                 std::to_string(i) + " has non-finite entry " +
                                 std::to_string(j));
        }
      }
    }
  };
  check_rows(eq_rows_, eq_rhs_, "equality");
  check_rows(ub_rows_, ub_rhs_, "inequality");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace vof::lp
