// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "srr/lp.hpp"
#include "srr/random.hpp"
#include "srr/sequencing.hpp"

using namespace srr;

namespace {

HiringInstance random_hiring(Rng& rng, int n) {
  HiringInstance inst;
  inst.w.resize(n);
  inst.p.resize(n);
  for (int i = 0; i < n; ++i) {
    inst.w[i] = 10.0 * rng.uniform();
    inst.p[i] = 0.05 + 0.95 * rng.uniform();
  }
  inst.T = 1 + static_cast<int>(rng.below(n));
  inst.k = 1 + static_cast<int>(rng.below(3));
  return inst;
}

}  // namespace

TEST_CASE("single variable identity") {
  LinearProgram lp = LinearProgram::with_bounds(1, 0.0, 1.0);
  lp.objective << 1.0;
  lp.add_constraint(Eigen::VectorXd::Ones(1), Relation::LessEqual, 1.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.is_basic);
}

TEST_CASE("two-variable selection relaxation solved at its vertex") {
  // max x1 + 100 x2, x1 + x2 <= 1, 0 <= x1 <= 1, 0 <= x2 <= 0.01
  LinearProgram lp = LinearProgram::with_bounds(2, 0.0, 1.0);
  lp.objective << 1.0, 100.0;
  lp.upper << 1.0, 0.01;
  lp.add_constraint(Eigen::VectorXd::Ones(2), Relation::LessEqual, 1.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.values[0] == doctest::Approx(0.99).epsilon(1e-10));
  CHECK(sol.values[1] == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(sol.objective_value == doctest::Approx(1.99).epsilon(1e-10));
}

TEST_CASE("contradictory constraints are infeasible") {
  LinearProgram lp = LinearProgram::with_bounds(1, 0.0, 1.0);
  lp.objective << 1.0;
  Eigen::VectorXd row(1);
  row << 1.0;
  lp.add_constraint(row, Relation::LessEqual, -1.0);
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("missing cap is unbounded") {
  LinearProgram lp =
      LinearProgram::with_bounds(1, 0.0, std::numeric_limits<double>::infinity());
  lp.objective << 1.0;
  CHECK(solve_lp(lp).status == SolveStatus::Unbounded);
}

TEST_CASE("equalities and redundant rows") {
  // max x - y with x + y = 1 stated twice
  LinearProgram lp = LinearProgram::with_bounds(2, 0.0, 1.0);
  lp.objective << 1.0, -1.0;
  lp.add_constraint(Eigen::VectorXd::Ones(2), Relation::Equal, 1.0);
  lp.add_constraint(Eigen::VectorXd::Ones(2), Relation::Equal, 1.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.values[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.values[1] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("fractional indices from a hand-built solution") {
  LpSolution sol;
  sol.status = SolveStatus::Optimal;
  sol.values.resize(3);
  sol.values << 0.5, 0.5, 1.0;
  sol.lower = Eigen::VectorXd::Zero(3);
  sol.upper = Eigen::VectorXd::Ones(3);
  const auto frac = fractional_indices(sol, 1e-7);
  REQUIRE(frac.size() == 2);
  CHECK(frac[0] == 0);
  CHECK(frac[1] == 1);
}

TEST_CASE("basic optima of the offer relaxation have at most two fractional offers") {
  Rng rng(20240901);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(48));
    const HiringInstance inst = random_hiring(rng, n);
    const LinearProgram lp = build_hiring_lp(inst);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.is_basic);
    const auto frac = fractional_indices(sol, 1e-7);
    CHECK(frac.size() <= 2);  // at most as many as the non-box constraints
    CHECK(feasibility_residual(lp, sol) <= 1e-9);
  }
}

TEST_CASE("objective value is invariant under variable permutation") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(20));
    const HiringInstance inst = random_hiring(rng, n);
    const LinearProgram lp = build_hiring_lp(inst);
    const double base = solve_lp(lp).objective_value;

    std::vector<Eigen::Index> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    LinearProgram shuffled = lp;
    for (int i = 0; i < n; ++i) {
      shuffled.objective[i] = lp.objective[perm[i]];
      shuffled.constraint_matrix.col(i) = lp.constraint_matrix.col(perm[i]);
      shuffled.lower[i] = lp.lower[perm[i]];
      shuffled.upper[i] = lp.upper[perm[i]];
    }
    CHECK(solve_lp(shuffled).objective_value == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp = LinearProgram::with_bounds(2, 0.0, 1.0);
  lp.objective << 1.0, 1.0;
  Eigen::VectorXd short_row(1);
  short_row << 1.0;
  CHECK_THROWS_AS(lp.add_constraint(short_row, Relation::LessEqual, 1.0),
                  std::invalid_argument);
  lp.lower[0] = 2.0;  // above the upper bound
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}
