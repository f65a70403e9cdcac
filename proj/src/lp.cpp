// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srr {

namespace {

constexpr double kPivotTol = 1e-9;

}  // namespace

LinearProgram LinearProgram::with_bounds(Eigen::Index n, double lo, double hi) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  lp.constraint_matrix.resize(0, n);
  lp.rhs.resize(0);
  lp.lower = Eigen::VectorXd::Constant(n, lo);
  lp.upper = Eigen::VectorXd::Constant(n, hi);
  return lp;
}

void LinearProgram::add_constraint(const Eigen::VectorXd& row, Relation rel, double b) {
  if (row.size() != num_variables()) {
    throw std::invalid_argument("constraint row length does not match variable count");
  }
  constraint_matrix.conservativeResize(constraint_matrix.rows() + 1, num_variables());
  constraint_matrix.row(constraint_matrix.rows() - 1) = row;
  relations.push_back(rel);
  rhs.conservativeResize(rhs.size() + 1);
  rhs[rhs.size() - 1] = b;
}

void LinearProgram::validate() const {
  const Eigen::Index n = num_variables();
  if (n == 0) throw std::invalid_argument("LP has no variables");
  if (constraint_matrix.cols() != n && constraint_matrix.rows() > 0) {
    throw std::invalid_argument("constraint matrix column count mismatch");
  }
  if (constraint_matrix.rows() != static_cast<Eigen::Index>(relations.size()) ||
      constraint_matrix.rows() != rhs.size()) {
    throw std::invalid_argument("constraint rows, relations and rhs sizes disagree");
  }
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("bound vectors must cover every variable");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j]) || lower[j] < 0.0) {
      throw std::invalid_argument("lower bounds must be finite and nonnegative");
    }
    if (lower[j] > upper[j]) throw std::invalid_argument("lower bound exceeds upper bound");
  }
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    if (!std::isfinite(rhs[i])) throw std::invalid_argument("right-hand sides must be finite");
  }
}

namespace {

// Tableau state for the two-phase simplex. Column layout:
// [structural | slack/surplus | artificial], last column of `tab` is the rhs.
struct Tableau {
  Eigen::MatrixXd tab;             // rows x (cols + 1)
  Eigen::VectorXd zrow;            // reduced costs, length cols + 1
  std::vector<Eigen::Index> basis; // basic column per row
  std::vector<char> banned;        // columns excluded from entering
  Eigen::Index cols = 0;

  void pivot(Eigen::Index r, Eigen::Index s) {
    tab.row(r) /= tab(r, s);
    for (Eigen::Index q = 0; q < tab.rows(); ++q) {
      if (q == r) continue;
      const double f = tab(q, s);
      if (f != 0.0) tab.row(q) -= f * tab.row(r);
    }
    const double fz = zrow[s];
    if (fz != 0.0) zrow -= fz * tab.row(r).transpose();
    basis[r] = s;
  }

  // Bland's rule: enter the lowest-index improving column; leave by the
  // minimum ratio, ties broken toward the lowest basic column index.
  // Returns false when no improving column remains (optimal), throws nothing;
  // sets *unbounded when an improving column has no blocking row.
  bool step(bool* unbounded) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!banned[j] && zrow[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return false;
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const double a = tab(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab(r, cols) / a;
      if (ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && (leave < 0 || basis[r] < basis[leave]))) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  void rebuild_zrow(const Eigen::VectorXd& cost) {
    zrow = -cost;
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const double cb = cost[basis[r]];
      if (cb != 0.0) zrow += cb * tab.row(r).transpose();
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  const Eigen::Index n = lp.num_variables();

  // Shift variables to start at zero and turn finite upper bounds into rows,
  // so a basic feasible point of the slack form is a vertex of the box-and-row
  // polyhedron.
  struct Row {
    Eigen::VectorXd a;
    double b;
    Relation rel;
  };
  std::vector<Row> rows;
  for (Eigen::Index i = 0; i < lp.num_constraints(); ++i) {
    rows.push_back({lp.constraint_matrix.row(i).transpose(),
                    lp.rhs[i] - lp.constraint_matrix.row(i).dot(lp.lower),
                    lp.relations[i]});
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = 1.0;
      rows.push_back({e, lp.upper[j] - lp.lower[j], Relation::LessEqual});
    }
  }

  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Eigen::Index num_slacks = 0, num_artificials = 0;
  for (const Row& row : rows) {
    if (row.rel == Relation::LessEqual) ++num_slacks;
    if (row.rel == Relation::Equal || row.b < 0.0) ++num_artificials;
  }

  Tableau t;
  t.cols = n + num_slacks + num_artificials;
  t.tab = Eigen::MatrixXd::Zero(m, t.cols + 1);
  t.basis.assign(m, -1);
  t.banned.assign(t.cols, 0);

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(t.cols);
  Eigen::Index slack_at = n, art_at = n + num_slacks;
  for (Eigen::Index r = 0; r < m; ++r) {
    double sign = rows[r].b < 0.0 ? -1.0 : 1.0;
    t.tab.row(r).head(n) = sign * rows[r].a.transpose();
    t.tab(r, t.cols) = sign * rows[r].b;
    if (rows[r].rel == Relation::LessEqual) {
      t.tab(r, slack_at) = sign;
      if (sign > 0.0) t.basis[r] = slack_at;
      ++slack_at;
    }
    if (t.basis[r] < 0) {
      t.tab(r, art_at) = 1.0;
      t.basis[r] = art_at;
      phase1_cost[art_at] = -1.0;
      ++art_at;
    }
  }

  LpSolution sol;
  sol.lower = lp.lower;
  sol.upper = lp.upper;
  sol.values = Eigen::VectorXd::Zero(n);

  bool unbounded = false;
  if (num_artificials > 0) {
    t.rebuild_zrow(phase1_cost);
    while (t.step(&unbounded)) {
    }
    const double infeasibility = -t.zrow[t.cols];
    if (infeasibility > 1e-8) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    // Drive surviving artificials out of the basis; a row in which no real
    // column can pivot is redundant and gets dropped.
    std::vector<Eigen::Index> drop;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t.basis[r] < n + num_slacks) continue;
      Eigen::Index s = -1;
      for (Eigen::Index j = 0; j < n + num_slacks; ++j) {
        if (std::abs(t.tab(r, j)) > kPivotTol) {
          s = j;
          break;
        }
      }
      if (s >= 0) {
        t.pivot(r, s);
      } else {
        drop.push_back(r);
      }
    }
    if (!drop.empty()) {
      Eigen::Index keep = 0;
      std::vector<Eigen::Index> new_basis;
      Eigen::MatrixXd new_tab(m - static_cast<Eigen::Index>(drop.size()), t.cols + 1);
      std::size_t d = 0;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (d < drop.size() && drop[d] == r) {
          ++d;
          continue;
        }
        new_tab.row(keep) = t.tab.row(r);
        new_basis.push_back(t.basis[r]);
        ++keep;
      }
      t.tab = std::move(new_tab);
      t.basis = std::move(new_basis);
    }
    for (Eigen::Index j = n + num_slacks; j < t.cols; ++j) t.banned[j] = 1;
  }

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(t.cols);
  phase2_cost.head(n) = lp.objective;
  t.rebuild_zrow(phase2_cost);
  unbounded = false;
  while (t.step(&unbounded)) {
  }
  if (unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }

  for (std::size_t r = 0; r < t.basis.size(); ++r) {
    if (t.basis[r] < n) sol.values[t.basis[r]] = t.tab(static_cast<Eigen::Index>(r), t.cols);
  }
  sol.values += lp.lower;
  sol.objective_value = lp.objective.dot(sol.values);
  sol.is_basic = true;
  sol.status = SolveStatus::Optimal;
  return sol;
}

std::vector<Eigen::Index> fractional_indices(const LpSolution& sol, double tol) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < sol.values.size(); ++j) {
    if (sol.values[j] > sol.lower[j] + tol && sol.values[j] < sol.upper[j] - tol) {
      out.push_back(j);
    }
  }
  return out;
}

double feasibility_residual(const LinearProgram& lp, const LpSolution& sol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lp.num_constraints(); ++i) {
    const double lhs = lp.constraint_matrix.row(i).dot(sol.values);
    const double gap = lp.relations[i] == Relation::Equal ? std::abs(lhs - lp.rhs[i])
                                                          : lhs - lp.rhs[i];
    worst = std::max(worst, gap);
  }
  for (Eigen::Index j = 0; j < lp.num_variables(); ++j) {
    worst = std::max(worst, lp.lower[j] - sol.values[j]);
    worst = std::max(worst, sol.values[j] - lp.upper[j]);
  }
  return worst;
}

}  // namespace srr
