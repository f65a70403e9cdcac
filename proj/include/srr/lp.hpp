// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_LP_HPP
#define SRR_LP_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace srr {

enum class Relation { LessEqual, Equal };

enum class SolveStatus { Optimal, Infeasible, Unbounded };

// Dense maximization LP:  max c'x  s.t.  A x (<=|=) b,  lower <= x <= upper.
// Lower bounds must be nonnegative and finite; upper bounds may be +inf.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraint_matrix;  // one row per constraint
  std::vector<Relation> relations;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<std::string> names;  // optional per-variable labels

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return constraint_matrix.rows(); }

  static LinearProgram with_bounds(Eigen::Index n, double lo, double hi);
  void add_constraint(const Eigen::VectorXd& row, Relation rel, double b);
  // Throws std::invalid_argument when the program is malformed.
  void validate() const;
};

struct LpSolution {
  Eigen::VectorXd values;
  double objective_value = 0.0;
  bool is_basic = false;
  SolveStatus status = SolveStatus::Infeasible;
  // Box copied from the program so fractionality can be judged in isolation.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

// Two-phase dense tableau simplex with Bland's anti-cycling rule.
// Returns a basic (vertex) optimal solution; deterministic for fixed input.
LpSolution solve_lp(const LinearProgram& lp);

// Indices of variables strictly inside their box, i.e. in (lo+tol, hi-tol).
std::vector<Eigen::Index> fractional_indices(const LpSolution& sol, double tol = 1e-7);

// Max-norm violation of constraints and bounds at sol.values.
double feasibility_residual(const LinearProgram& lp, const LpSolution& sol);

}  // namespace srr

#endif  // SRR_LP_HPP
