// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_RATIONING_HPP
#define SRR_RATIONING_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "srr/lp.hpp"

namespace srr {

// k units of supply are rationed over agents visited in fixed order; agent i,
// if offered a unit, takes it independently with probability x[i].
struct RationingInstance {
  int k = 1;
  Eigen::VectorXd x;

  Eigen::Index n() const { return x.size(); }
  bool supply_meets_demand() const { return x.sum() <= static_cast<double>(k) + 1e-12; }
  void validate() const;
};

// Offer plan for general k. alpha(i, l) is the unconditional probability of
// offering to agent i with l+1 units remaining; beta(i, l) the probability of
// having l+1 units remaining when agent i is reached. Every row of alpha sums
// to gamma.
struct KUnitPlan {
  double gamma = 0.0;
  Eigen::MatrixXd alpha;  // n x k
  Eigen::MatrixXd beta;   // n x k
};

struct OfferTrace {
  std::vector<std::uint8_t> offered;   // per agent
  std::vector<std::uint8_t> took;      // per agent, implies offered
  std::vector<int> units_remaining;    // per visit step, plus final state
};

// Best uniform offer probability for k = 1 under the fixed visiting order:
// 1 / (1 + sum of x_i over all agents but the last).
double gamma_fixed_order_k1(const RationingInstance& inst);

// Activation-bit probabilities gamma / (1 - gamma * sum_{j<i} x_j) of the
// single-unit policy. Throws if some bit probability leaves [0, 1].
Eigen::VectorXd single_unit_bit_probabilities(const RationingInstance& inst, double gamma);

// One sample path of the single-unit policy (k = 1).
OfferTrace run_single_unit_policy(const RationingInstance& inst, double gamma,
                                  std::uint64_t seed);

// Exact per-agent offer probabilities of the single-unit policy, by tracking
// the probability that the unit survives each visit.
Eigen::VectorXd single_unit_offer_probabilities(const RationingInstance& inst, double gamma);

// The plan LP: maximize gamma subject to per-agent offer totals, the state
// mass-balance recurrence, and 0 <= alpha <= beta.
LinearProgram build_kunit_lp(const RationingInstance& inst);

// Optimal plan via bisection on the greedy top-down fill (offer preferentially
// in states with more units remaining). Its gamma equals the optimum of
// build_kunit_lp.
KUnitPlan solve_kunit_plan(const RationingInstance& inst);

// One sample path: with l+1 units remaining at agent i, offer with
// probability alpha(i,l) / beta(i,l), reading 0/0 as 0.
OfferTrace run_kunit_policy(const KUnitPlan& plan, const RationingInstance& inst,
                            std::uint64_t seed);

// Exact per-agent offer probabilities of the plan policy via the forward
// chain over the units-remaining state.
Eigen::VectorXd kunit_offer_probabilities(const KUnitPlan& plan, const RationingInstance& inst);

// Exact distribution of the units-remaining state seen by each agent under
// the plan policy (n x k, column l = probability of l+1 units remaining).
Eigen::MatrixXd kunit_state_probabilities(const KUnitPlan& plan, const RationingInstance& inst);

// Random-order policy for k = 1 and sum(x) <= 1: each agent draws an arrival
// time uniform on [0,1], agents are visited in time order, and agent i's
// activation bit fires with probability exp(-U_i * x_i). Offers every agent
// the unit with probability at least 1 - 1/e.
OfferTrace run_random_order_policy(const RationingInstance& inst, std::uint64_t seed);

// Worst-case random-order guarantee 1 - e^{-k} k^k / k!.
double guarantee_random_order(int k);

// Worst-case fixed-order guarantee for k = 2: the larger root of
// e^{1/g - 3} = 2/g - 3, about 0.615.
double two_unit_fixed_order_guarantee();

// E[min{sum Bernoulli(x_i), k}] / sum(x_i), computed exactly by dynamic
// programming over agents with the count capped at k.
double correlation_gap_ratio(const Eigen::VectorXd& x, int k);

}  // namespace srr

#endif  // SRR_RATIONING_HPP
