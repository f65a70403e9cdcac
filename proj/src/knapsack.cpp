// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/knapsack.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "srr/random.hpp"

namespace srr {

void KnapsackInstance::validate() const {
  if (horizon < 1) throw std::invalid_argument("knapsack instance needs horizon >= 1");
  if (jobs.empty()) throw std::invalid_argument("knapsack instance needs jobs");
  for (const auto& job : jobs) {
    if (job.empty()) throw std::invalid_argument("every job needs at least one outcome");
    double total = 0.0;
    for (const auto& outcome : job) {
      if (outcome.weight < 0.0) throw std::invalid_argument("weights must be nonnegative");
      if (outcome.duration < 1 || outcome.duration > horizon) {
        throw std::invalid_argument("durations must be integers in [1, T]");
      }
      if (outcome.prob <= 0.0) throw std::invalid_argument("outcome probabilities must be positive");
      total += outcome.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("job outcome probabilities must sum to 1");
    }
  }
}

double KnapsackInstance::survival(Eigen::Index i, int steps) const {
  double p = 0.0;
  for (const auto& outcome : jobs[i]) {
    if (outcome.duration > steps) p += outcome.prob;
  }
  return p;
}

double KnapsackInstance::completion_weight(Eigen::Index i, int t) const {
  double w = 0.0;
  for (const auto& outcome : jobs[i]) {
    if (outcome.duration <= horizon - t + 1) w += outcome.weight * outcome.prob;
  }
  return w;
}

double KnapsackInstance::expected_weight(Eigen::Index i) const {
  double w = 0.0;
  for (const auto& outcome : jobs[i]) w += outcome.weight * outcome.prob;
  return w;
}

double KnapsackInstance::expected_capped_duration(Eigen::Index i) const {
  double d = 0.0;
  for (const auto& outcome : jobs[i]) {
    d += std::min(outcome.duration, horizon) * outcome.prob;
  }
  return d;
}

std::vector<std::pair<int, double>> KnapsackInstance::duration_law(Eigen::Index i) const {
  std::map<int, double> law;
  for (const auto& outcome : jobs[i]) law[outcome.duration] += outcome.prob;
  return {law.begin(), law.end()};
}

LinearProgram build_naive_knapsack_lp(const KnapsackInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.n();
  LinearProgram lp = LinearProgram::with_bounds(n, 0.0, 1.0);
  lp.names.resize(n);
  Eigen::VectorXd sizes(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lp.objective[i] = inst.expected_weight(i);
    sizes[i] = inst.expected_capped_duration(i);
    lp.names[i] = "y_" + std::to_string(i);
  }
  lp.add_constraint(sizes, Relation::LessEqual, 2.0 * inst.horizon);
  return lp;
}

KnapsackInstance gap_instance(int T) {
  if (T < 2) throw std::invalid_argument("gap instance needs T >= 2");
  KnapsackInstance inst;
  inst.horizon = T;
  const double hit = 1.0 / static_cast<double>(T);
  for (int i = 0; i < T; ++i) {
    inst.jobs.push_back({{1.0, T, hit}, {0.0, 1, 1.0 - hit}});
  }
  return inst;
}

LinearProgram build_time_indexed_lp(const KnapsackInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.n();
  const int T = inst.horizon;
  LinearProgram lp = LinearProgram::with_bounds(n * T, 0.0, 1.0);
  lp.names.resize(n * T);
  auto at = [T](Eigen::Index i, int t) { return i * T + (t - 1); };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int t = 1; t <= T; ++t) {
      lp.objective[at(i, t)] = inst.completion_weight(i, t);
      lp.names[at(i, t)] = "y_" + std::to_string(i) + "_" + std::to_string(t);
    }
  }
  Eigen::VectorXd row(n * T);
  for (int t = 1; t <= T; ++t) {
    row.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int u = 1; u <= t; ++u) row[at(i, u)] = inst.survival(i, t - u);
    }
    lp.add_constraint(row, Relation::LessEqual, 1.0);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    row.setZero();
    for (int t = 1; t <= T; ++t) row[at(i, t)] = 1.0;
    lp.add_constraint(row, Relation::LessEqual, 1.0);
  }
  return lp;
}

StartTable start_table_from(const LpSolution& sol, const KnapsackInstance& inst) {
  const Eigen::Index n = inst.n();
  const int T = inst.horizon;
  if (sol.values.size() != n * T) {
    throw std::invalid_argument("solution size does not match n x T start table");
  }
  StartTable table;
  table.y.resize(n, T);
  for (Eigen::Index i = 0; i < n; ++i) {
    table.y.row(i) = sol.values.segment(i * T, T).transpose();
  }
  return table;
}

namespace {

// State key: started-set mask, in-service job (+1; 0 when idle), remaining
// busy steps including the current time.
std::uint64_t state_key(std::uint32_t mask, int job, int rem) {
  return static_cast<std::uint64_t>(mask) | (static_cast<std::uint64_t>(job + 1) << 16) |
         (static_cast<std::uint64_t>(rem) << 24);
}

constexpr double kStatePruneTol = 1e-15;

// Draw probabilities for one time step plus the overflow flag.
Eigen::VectorXd draw_vector(const Eigen::MatrixXd& y, const Eigen::MatrixXd& free, int t,
                            bool* renormalized) {
  const Eigen::Index n = y.rows();
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double yi = y(i, t - 1);
    const double fi = free(i, t - 1);
    if (yi <= 0.0) {
      q[i] = 0.0;
    } else if (fi <= 0.0) {
      q[i] = 1.0;  // starved estimate; the renormalization below caps it
    } else {
      q[i] = yi / (2.0 * fi);
    }
  }
  const double total = q.sum();
  if (total > 1.0 + 1e-9) {
    q /= total;
    *renormalized = true;
  }
  return q;
}

}  // namespace

KnapsackAnalysis analyze_start_policy(const StartTable& y, const KnapsackInstance& inst,
                                      const FreeTable* draw_free) {
  inst.validate();
  const Eigen::Index n = inst.n();
  const int T = inst.horizon;
  if (n > 16) throw std::invalid_argument("exact analysis is limited to n <= 16 jobs");
  if (y.y.rows() != n || y.y.cols() != T) {
    throw std::invalid_argument("start table shape does not match instance");
  }

  std::vector<std::vector<std::pair<int, double>>> laws;
  for (Eigen::Index i = 0; i < n; ++i) laws.push_back(inst.duration_law(i));

  KnapsackAnalysis analysis;
  analysis.free.free.setZero(n, T);
  analysis.free.source = FreeSource::Exact;
  analysis.start_prob.setZero(n, T);

  std::map<std::uint64_t, double> states;
  states[state_key(0, -1, 0)] = 1.0;
  for (int t = 1; t <= T; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double f = 0.0;
      for (const auto& [key, mass] : states) {
        const bool idle = ((key >> 16) & 0xff) == 0;
        const bool unstarted = ((key >> i) & 1u) == 0;
        if (idle && unstarted) f += mass;
      }
      analysis.free.free(i, t - 1) = f;
    }

    const Eigen::MatrixXd& free_for_draw =
        draw_free != nullptr ? draw_free->free : analysis.free.free;
    bool renorm = false;
    const Eigen::VectorXd q = draw_vector(y.y, free_for_draw, t, &renorm);

    std::map<std::uint64_t, double> next;
    auto deposit = [&](std::uint64_t key, double mass) {
      if (mass > kStatePruneTol) next[key] += mass;
    };
    for (const auto& [key, mass] : states) {
      const std::uint32_t mask = static_cast<std::uint32_t>(key & 0xffffu);
      const int job = static_cast<int>((key >> 16) & 0xffu) - 1;
      const int rem = static_cast<int>(key >> 24);
      if (job >= 0) {
        // Busy: any draw is wasted; the service clock advances.
        if (rem - 1 >= 1) {
          deposit(state_key(mask, job, rem - 1), mass);
        } else {
          deposit(state_key(mask, -1, 0), mass);
        }
        continue;
      }
      double stay = 1.0 - q.sum();
      for (Eigen::Index i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) {
          stay += q[i];
          continue;
        }
        const double start_mass = mass * q[i];
        if (start_mass <= 0.0) continue;
        analysis.start_prob(i, t - 1) += start_mass;
        analysis.expected_weight += start_mass * inst.completion_weight(i, t);
        const std::uint32_t started = mask | (1u << i);
        for (const auto& [d, pd] : laws[i]) {
          if (d - 1 >= 1) {
            deposit(state_key(started, static_cast<int>(i), d - 1), start_mass * pd);
          } else {
            deposit(state_key(started, -1, 0), start_mass * pd);
          }
        }
      }
      deposit(state_key(mask, -1, 0), mass * std::max(0.0, stay));
    }
    states = std::move(next);
  }
  return analysis;
}

FreeTable exact_free_table(const StartTable& y, const KnapsackInstance& inst) {
  if (inst.n() > 12) {
    throw std::invalid_argument("exact free table is guarded to n <= 12; use sampled_free_table");
  }
  return analyze_start_policy(y, inst).free;
}

namespace {

// Replay the policy through end_time using the supplied free estimates;
// returns the (idle, started-mask) pair observed at end_time + 1.
std::pair<bool, std::uint32_t> replay_prefix(const StartTable& y, const KnapsackInstance& inst,
                                             const Eigen::MatrixXd& free, int end_time,
                                             Rng& rng) {
  std::uint32_t started = 0;
  int busy_until = 0;  // last time the server is occupied
  for (int t = 1; t <= end_time; ++t) {
    bool renorm = false;
    const Eigen::VectorXd q = draw_vector(y.y, free, t, &renorm);
    const int i = rng.categorical(q);
    if (i < 0) continue;
    const bool idle = busy_until < t;
    if (!idle || ((started >> i) & 1u)) continue;
    started |= 1u << i;
    const double u = rng.uniform();
    double cum = 0.0;
    int duration = inst.jobs[i].back().duration;
    for (const auto& outcome : inst.jobs[i]) {
      cum += outcome.prob;
      if (u < cum) {
        duration = outcome.duration;
        break;
      }
    }
    busy_until = t + duration - 1;
  }
  return {busy_until <= end_time, started};
}

}  // namespace

FreeTable sampled_free_table(const StartTable& y, const KnapsackInstance& inst,
                             int replications, std::uint64_t seed) {
  inst.validate();
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  const Eigen::Index n = inst.n();
  const int T = inst.horizon;
  FreeTable table;
  table.source = FreeSource::Sampled;
  table.replications = replications;
  table.free.setZero(n, T);
  table.free.col(0).setOnes();
  for (int t = 2; t <= T; ++t) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < replications; ++r) {
      Rng rng(replication_seed(seed, (static_cast<std::uint64_t>(t) << 40) +
                                         static_cast<std::uint64_t>(r)));
      const auto [idle, started] = replay_prefix(y, inst, table.free, t - 1, rng);
      if (!idle) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (((started >> i) & 1u) == 0) counts[i] += 1.0;
      }
    }
    table.free.col(t - 1) = counts / static_cast<double>(replications);
  }
  return table;
}

ScheduleTrace run_start_policy(const StartTable& y, const FreeTable& free,
                               const KnapsackInstance& inst, std::uint64_t seed) {
  inst.validate();
  const int T = inst.horizon;
  Rng rng(seed);
  ScheduleTrace trace;
  std::uint32_t started = 0;
  int busy_until = 0;
  for (int t = 1; t <= T; ++t) {
    bool renorm = false;
    const Eigen::VectorXd q = draw_vector(y.y, free.free, t, &renorm);
    if (renorm) ++trace.renormalized_steps;
    const int i = rng.categorical(q);
    if (i < 0) continue;
    if (busy_until >= t || ((started >> i) & 1u)) continue;
    started |= 1u << i;
    const double u = rng.uniform();
    double cum = 0.0;
    const JobOutcome* drawn = &inst.jobs[i].back();
    for (const auto& outcome : inst.jobs[i]) {
      cum += outcome.prob;
      if (u < cum) {
        drawn = &outcome;
        break;
      }
    }
    busy_until = t + drawn->duration - 1;
    const bool completed = busy_until <= T;
    trace.starts.push_back({i, t, drawn->duration, drawn->weight, completed});
    if (completed) trace.completed_weight += drawn->weight;
  }
  return trace;
}

}  // namespace srr
