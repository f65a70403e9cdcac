// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_KNAPSACK_HPP
#define SRR_KNAPSACK_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "srr/lp.hpp"

namespace srr {

// One joint (weight, duration) outcome of a job.
struct JobOutcome {
  double weight = 0.0;
  int duration = 1;
  double prob = 1.0;
};

// A single server processes jobs over an integer horizon T; starting job i
// reveals a joint (weight, duration) draw, jobs cannot be cancelled, and the
// weight counts only when the job completes by T.
struct KnapsackInstance {
  int horizon = 1;
  std::vector<std::vector<JobOutcome>> jobs;

  Eigen::Index n() const { return static_cast<Eigen::Index>(jobs.size()); }
  void validate() const;

  double survival(Eigen::Index i, int steps) const;           // P[D_i > steps]
  double completion_weight(Eigen::Index i, int t) const;      // E[W_i 1(D_i <= T-t+1)]
  double expected_weight(Eigen::Index i) const;                // E[W_i]
  double expected_capped_duration(Eigen::Index i) const;       // E[min{D_i, T}]
  std::vector<std::pair<int, double>> duration_law(Eigen::Index i) const;
};

// y(i, t-1) = probability of starting job i at time t.
struct StartTable {
  Eigen::MatrixXd y;  // n x T
};

enum class FreeSource { Exact, Sampled };

// free(i, t-1) = probability that at time t the server is idle and job i has
// not been started, under the policy's own randomness.
struct FreeTable {
  Eigen::MatrixXd free;
  FreeSource source = FreeSource::Exact;
  int replications = 0;
};

// Budget-only relaxation:
// max sum E[W_i] y_i  s.t.  sum E[min{D_i, T}] y_i <= 2T,  0 <= y <= 1.
LinearProgram build_naive_knapsack_lp(const KnapsackInstance& inst);

// Family on which the budget-only relaxation is off by a factor n: T jobs,
// each worth 1 with duration T w.p. 1/n and worth 0 with duration 1 otherwise.
KnapsackInstance gap_instance(int T);

// Time-indexed relaxation:
// max sum_{i,t} E[W_i 1(D_i <= T-t+1)] y_it
// s.t. expected server occupancy at each time <= 1 and each job starts at
// most once in expectation.
LinearProgram build_time_indexed_lp(const KnapsackInstance& inst);

StartTable start_table_from(const LpSolution& sol, const KnapsackInstance& inst);

// Exact forward pass over the policy's state distribution (started set plus
// in-service job and elapsed time). When draw_free is null the pass feeds its
// own exact free values into the draw probabilities.
struct KnapsackAnalysis {
  FreeTable free;
  Eigen::MatrixXd start_prob;  // n x T
  double expected_weight = 0.0;
};

KnapsackAnalysis analyze_start_policy(const StartTable& y, const KnapsackInstance& inst,
                                      const FreeTable* draw_free = nullptr);

// Exact free probabilities; guarded to n <= 12 (use sampled_free_table above
// that).
FreeTable exact_free_table(const StartTable& y, const KnapsackInstance& inst);

// Self-sampling estimate: column t is the empirical frequency over R fresh
// replays of the policy through time t-1, replayed with the already-frozen
// estimates for earlier columns.
FreeTable sampled_free_table(const StartTable& y, const KnapsackInstance& inst,
                             int replications, std::uint64_t seed);

struct StartEvent {
  Eigen::Index job;
  int time;
  int duration;     // realized
  double weight;    // realized
  bool completed;   // finished by the horizon
};

struct ScheduleTrace {
  std::vector<StartEvent> starts;
  double completed_weight = 0.0;
  int renormalized_steps = 0;  // times the draw vector overflowed and was rescaled
};

// One sample path: at each time draw at most one candidate with probability
// y_it / (2 free(i,t)) (0/0 read as 0) and start it if the server is idle and
// the job unstarted.
ScheduleTrace run_start_policy(const StartTable& y, const FreeTable& free,
                               const KnapsackInstance& inst, std::uint64_t seed);

}  // namespace srr

#endif  // SRR_KNAPSACK_HPP
