// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_MATCHING_HPP
#define SRR_MATCHING_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "srr/lp.hpp"

namespace srr {

// Resources j can each be matched once; agents arrive in order, materialize
// independently with probability p[i], and a materialized agent can be
// matched to one available resource for reward w(j, i).
struct MatchingInstance {
  Eigen::VectorXd p;   // per agent
  Eigen::MatrixXd w;   // m x n

  Eigen::Index m() const { return w.rows(); }
  Eigen::Index n() const { return w.cols(); }
  void validate() const;
};

struct MatchResult {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> matches;  // (resource, agent) or edge ends
  std::vector<Eigen::Index> probed;  // edge ids probed, graph setting only
  double total_weight = 0.0;
};

// max sum w_ji x_ji  s.t.  sum_i x_ji <= 1 per resource, sum_j x_ji <= p_i
// per agent. With tighten set, also x_ji <= p_i (1 - sum_{i'<i} x_ji'),
// which any online policy satisfies.
LinearProgram build_matching_lp(const MatchingInstance& inst, bool tighten = false);

Eigen::MatrixXd matching_solution_matrix(const LpSolution& sol, const MatchingInstance& inst);

// Online policy: each resource runs an independent single-unit rationing bit
// stream at guarantee 1/2 over its row of x; each materialized agent draws a
// resource with probability x_ji / p_i and is matched if the resource is
// available and its bit fired. Matches every pair with probability x_ji / 2.
MatchResult run_online_matching_policy(const Eigen::MatrixXd& x, const MatchingInstance& inst,
                                       std::uint64_t seed);

// Exact per-pair match probabilities of the policy via a forward pass over
// the resource-availability mask; guarded to m <= 20.
Eigen::MatrixXd exact_match_probabilities(const Eigen::MatrixXd& x, const MatchingInstance& inst);

// One resource, two agents: p = (1, eps), w = (1, 1/eps). The relaxation is
// worth nearly 2 while no online policy beats 1.
MatchingInstance tight_example(double eps);

struct GraphEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
  double prob = 0.0;
};

// Undirected graph whose edges exist independently with probability prob and
// must be committed to the matching when a probe finds them; each vertex v
// tolerates at most patience[v] probes of its incident edges (nullopt means
// unbounded).
struct GraphProbingInstance {
  int num_vertices = 0;
  std::vector<GraphEdge> edges;
  std::vector<std::optional<int>> patience;

  void validate() const;
  std::vector<std::vector<Eigen::Index>> incidence() const;
};

struct SubsetCut {
  int vertex;
  std::vector<Eigen::Index> edges;
  double violation_at_add;
};

struct GraphProbingLp {
  LinearProgram lp;
  std::vector<SubsetCut> cuts;
};

// max sum w_e p_e y_e  s.t.  per-vertex patience sum y_e <= T_v and matching
// sum p_e y_e <= 1. With subset cuts, violated constraints
// sum_{e in S} p_e y_e <= 1 - prod_{e in S} (1 - p_e) are found by exhaustive
// per-vertex subset search (degree capped at 20) and added until none remain.
GraphProbingLp build_graph_probing_lp(const GraphProbingInstance& inst, bool with_subset_cuts);

// Baseline: visit the edges in a uniformly random order, probe each still
// feasible edge independently with probability y_e, and commit probed edges
// that exist.
MatchResult run_probe_commit(const Eigen::VectorXd& y, const GraphProbingInstance& inst,
                             std::uint64_t seed);

}  // namespace srr

#endif  // SRR_MATCHING_HPP
