// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_ORACLES_HPP
#define SRR_ORACLES_HPP

#include <cstdint>

#include <Eigen/Core>

#include "srr/knapsack.hpp"
#include "srr/matching.hpp"
#include "srr/sequencing.hpp"

namespace srr {

enum class OracleMethod { ExactDp, Exhaustive, ClosedForm, MonteCarlo };

struct OracleValue {
  double value = 0.0;
  OracleMethod method = OracleMethod::ExactDp;
  long state_count = 0;
};

// Optimal adaptive offering value by recursion over (candidates not yet
// offered, positions left); the number of offers left is implied by the set.
// Guarded to n <= 12.
OracleValue optimal_adaptive_hiring(const HiringInstance& inst);

enum class TopkMode { Exact, MonteCarlo };

// E[sum of the k largest weights among independently materialized agents].
// Exact mode (n <= 20) sums each agent's probability of ranking in the top k;
// Monte Carlo mode samples.
OracleValue offline_topk_value(const Eigen::VectorXd& w, const Eigen::VectorXd& p, int k,
                               TopkMode mode, long replications = 100000,
                               std::uint64_t seed = 1);

// Optimal online matching value by DP over (available-resource set, agent);
// guarded to m <= 6, n <= 10.
OracleValue optimal_online_matching(const MatchingInstance& inst);

// Optimal scheduling value by DP over (unstarted-job set, time); guarded to
// n <= 8, T <= 10.
OracleValue optimal_knapsack_policy(const KnapsackInstance& inst);

// E[min{sum Bernoulli(x_i), k}] via full convolution of the count
// distribution.
double poisson_binomial_min_k(const Eigen::VectorXd& x, int k);

}  // namespace srr

#endif  // SRR_ORACLES_HPP
