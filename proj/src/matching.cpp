// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "srr/random.hpp"

namespace srr {

void MatchingInstance::validate() const {
  if (m() < 1 || n() < 1) throw std::invalid_argument("matching instance needs resources and agents");
  if (p.size() != n()) throw std::invalid_argument("materialization vector length mismatch");
  for (Eigen::Index i = 0; i < n(); ++i) {
    if (p[i] < 0.0 || p[i] > 1.0) {
      throw std::invalid_argument("materialization probabilities must lie in [0, 1]");
    }
  }
  if ((w.array() < 0.0).any()) throw std::invalid_argument("rewards must be nonnegative");
}

LinearProgram build_matching_lp(const MatchingInstance& inst, bool tighten) {
  inst.validate();
  const Eigen::Index m = inst.m(), n = inst.n();
  auto at = [n](Eigen::Index j, Eigen::Index i) { return j * n + i; };
  LinearProgram lp = LinearProgram::with_bounds(m * n, 0.0, 1.0);
  lp.names.resize(m * n);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      lp.objective[at(j, i)] = inst.w(j, i);
      lp.names[at(j, i)] = "x_" + std::to_string(j) + "_" + std::to_string(i);
    }
  }
  Eigen::VectorXd row(m * n);
  for (Eigen::Index j = 0; j < m; ++j) {
    row.setZero();
    for (Eigen::Index i = 0; i < n; ++i) row[at(j, i)] = 1.0;
    lp.add_constraint(row, Relation::LessEqual, 1.0);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    row.setZero();
    for (Eigen::Index j = 0; j < m; ++j) row[at(j, i)] = 1.0;
    lp.add_constraint(row, Relation::LessEqual, inst.p[i]);
  }
  if (tighten) {
    // x_ji + p_i sum_{i'<i} x_ji' <= p_i
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        row.setZero();
        row[at(j, i)] = 1.0;
        for (Eigen::Index prev = 0; prev < i; ++prev) row[at(j, prev)] = inst.p[i];
        lp.add_constraint(row, Relation::LessEqual, inst.p[i]);
      }
    }
  }
  return lp;
}

Eigen::MatrixXd matching_solution_matrix(const LpSolution& sol, const MatchingInstance& inst) {
  const Eigen::Index m = inst.m(), n = inst.n();
  if (sol.values.size() != m * n) throw std::invalid_argument("solution size mismatch");
  Eigen::MatrixXd x(m, n);
  for (Eigen::Index j = 0; j < m; ++j) x.row(j) = sol.values.segment(j * n, n).transpose();
  return x;
}

namespace {

// Bit probability of resource j's rationing stream at agent i, at guarantee
// 1/2 over the row prefix sums of x.
Eigen::MatrixXd resource_bit_probabilities(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd bits(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      bits(j, i) = std::min(1.0, 0.5 / (1.0 - 0.5 * prefix));
      prefix += x(j, i);
    }
  }
  return bits;
}

void validate_lp_feasible(const Eigen::MatrixXd& x, const MatchingInstance& inst) {
  if (x.rows() != inst.m() || x.cols() != inst.n()) {
    throw std::invalid_argument("match-probability matrix shape mismatch");
  }
  if ((x.array() < -1e-9).any()) throw std::invalid_argument("match probabilities must be nonnegative");
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    if (x.row(j).sum() > 1.0 + 1e-9) {
      throw std::invalid_argument("per-resource match probabilities exceed 1");
    }
  }
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    if (x.col(i).sum() > inst.p[i] + 1e-9) {
      throw std::invalid_argument("per-agent match probabilities exceed materialization");
    }
  }
}

}  // namespace

MatchResult run_online_matching_policy(const Eigen::MatrixXd& x, const MatchingInstance& inst,
                                       std::uint64_t seed) {
  inst.validate();
  validate_lp_feasible(x, inst);
  const Eigen::Index m = inst.m(), n = inst.n();
  const Eigen::MatrixXd bits = resource_bit_probabilities(x);
  Rng rng(seed);
  MatchResult result;
  std::vector<std::uint8_t> available(m, 1);
  Eigen::VectorXd draw(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (inst.p[i] <= 0.0) continue;
    if (!rng.bernoulli(inst.p[i])) continue;
    draw = x.col(i) / inst.p[i];
    const double total = draw.sum();
    if (total > 1.0) draw /= total;  // clamp tolerance slop
    const int j = rng.categorical(draw);
    if (j < 0) continue;
    if (available[j] && rng.bernoulli(bits(j, i))) {
      available[j] = 0;
      result.matches.emplace_back(j, i);
      result.total_weight += inst.w(j, i);
    }
  }
  return result;
}

Eigen::MatrixXd exact_match_probabilities(const Eigen::MatrixXd& x, const MatchingInstance& inst) {
  inst.validate();
  validate_lp_feasible(x, inst);
  const Eigen::Index m = inst.m(), n = inst.n();
  if (m > 20) throw std::invalid_argument("exact tracking is limited to m <= 20 resources");
  const Eigen::MatrixXd bits = resource_bit_probabilities(x);
  Eigen::MatrixXd marginal = Eigen::MatrixXd::Zero(m, n);
  std::vector<double> state(static_cast<std::size_t>(1) << m, 0.0);
  state[(static_cast<std::size_t>(1) << m) - 1] = 1.0;  // all available
  std::vector<double> next(state.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t mask = 0; mask < state.size(); ++mask) {
      const double mass = state[mask];
      if (mass <= 0.0) continue;
      double stay = 1.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (((mask >> j) & 1u) == 0) continue;
        // materialize, draw j, bit fires
        const double take = x(j, i) * bits(j, i);
        marginal(j, i) += mass * take;
        next[mask & ~(static_cast<std::size_t>(1) << j)] += mass * take;
        stay -= take;
      }
      next[mask] += mass * std::max(0.0, stay);
    }
    state.swap(next);
  }
  return marginal;
}

MatchingInstance tight_example(double eps) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("eps must lie in (0, 1]");
  MatchingInstance inst;
  inst.p.resize(2);
  inst.p << 1.0, eps;
  inst.w.resize(1, 2);
  inst.w << 1.0, 1.0 / eps;
  return inst;
}

void GraphProbingInstance::validate() const {
  if (num_vertices < 1) throw std::invalid_argument("graph needs vertices");
  if (static_cast<int>(patience.size()) != num_vertices) {
    throw std::invalid_argument("patience must cover every vertex");
  }
  for (const auto& t : patience) {
    if (t && *t < 1) throw std::invalid_argument("patience must be a positive integer");
  }
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= num_vertices || e.v < 0 || e.v >= num_vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
    if (e.weight < 0.0) throw std::invalid_argument("edge weights must be nonnegative");
    if (e.prob < 0.0 || e.prob > 1.0) {
      throw std::invalid_argument("edge probabilities must lie in [0, 1]");
    }
  }
}

std::vector<std::vector<Eigen::Index>> GraphProbingInstance::incidence() const {
  std::vector<std::vector<Eigen::Index>> inc(num_vertices);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[edges[e].u].push_back(static_cast<Eigen::Index>(e));
    inc[edges[e].v].push_back(static_cast<Eigen::Index>(e));
  }
  return inc;
}

namespace {

LinearProgram base_probing_lp(const GraphProbingInstance& inst) {
  const Eigen::Index ne = static_cast<Eigen::Index>(inst.edges.size());
  LinearProgram lp = LinearProgram::with_bounds(ne, 0.0, 1.0);
  lp.names.resize(ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    lp.objective[e] = inst.edges[e].weight * inst.edges[e].prob;
    lp.names[e] = "y_" + std::to_string(inst.edges[e].u) + "_" + std::to_string(inst.edges[e].v);
  }
  const auto inc = inst.incidence();
  Eigen::VectorXd row(ne);
  for (int v = 0; v < inst.num_vertices; ++v) {
    if (inc[v].empty()) continue;
    if (inst.patience[v]) {
      row.setZero();
      for (Eigen::Index e : inc[v]) row[e] = 1.0;
      lp.add_constraint(row, Relation::LessEqual, *inst.patience[v]);
    }
    row.setZero();
    for (Eigen::Index e : inc[v]) row[e] = inst.edges[e].prob;
    lp.add_constraint(row, Relation::LessEqual, 1.0);
  }
  return lp;
}

}  // namespace

GraphProbingLp build_graph_probing_lp(const GraphProbingInstance& inst, bool with_subset_cuts) {
  inst.validate();
  GraphProbingLp result;
  result.lp = base_probing_lp(inst);
  if (!with_subset_cuts) return result;

  const auto inc = inst.incidence();
  for (const auto& star : inc) {
    if (star.size() > 20) {
      throw std::invalid_argument(
          "subset cuts use brute-force separation; max vertex degree is 20");
    }
  }
  const Eigen::Index ne = static_cast<Eigen::Index>(inst.edges.size());
  constexpr double kCutTol = 1e-7;
  for (int round = 0; round < 200; ++round) {
    const LpSolution sol = solve_lp(result.lp);
    if (sol.status != SolveStatus::Optimal) {
      throw std::runtime_error("cut loop hit an unsolvable relaxation");
    }
    bool added = false;
    for (int v = 0; v < inst.num_vertices; ++v) {
      const auto& star = inc[v];
      if (star.size() < 2) continue;
      double best_violation = kCutTol;
      std::uint32_t best_subset = 0;
      for (std::uint32_t subset = 1; subset < (1u << star.size()); ++subset) {
        double lhs = 0.0, none_exists = 1.0;
        for (std::size_t b = 0; b < star.size(); ++b) {
          if ((subset >> b) & 1u) {
            const Eigen::Index e = star[b];
            lhs += inst.edges[e].prob * sol.values[e];
            none_exists *= 1.0 - inst.edges[e].prob;
          }
        }
        const double violation = lhs - (1.0 - none_exists);
        if (violation > best_violation) {
          best_violation = violation;
          best_subset = subset;
        }
      }
      if (best_subset == 0) continue;
      SubsetCut cut;
      cut.vertex = v;
      cut.violation_at_add = best_violation;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(ne);
      double none_exists = 1.0;
      for (std::size_t b = 0; b < star.size(); ++b) {
        if ((best_subset >> b) & 1u) {
          const Eigen::Index e = star[b];
          cut.edges.push_back(e);
          row[e] = inst.edges[e].prob;
          none_exists *= 1.0 - inst.edges[e].prob;
        }
      }
      result.lp.add_constraint(row, Relation::LessEqual, 1.0 - none_exists);
      result.cuts.push_back(std::move(cut));
      added = true;
    }
    if (!added) return result;
  }
  throw std::runtime_error("subset-cut loop failed to converge");
}

MatchResult run_probe_commit(const Eigen::VectorXd& y, const GraphProbingInstance& inst,
                             std::uint64_t seed) {
  inst.validate();
  if (y.size() != static_cast<Eigen::Index>(inst.edges.size())) {
    throw std::invalid_argument("probe probabilities must cover every edge");
  }
  Rng rng(seed);
  std::vector<Eigen::Index> order(inst.edges.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<int> probes_left(inst.num_vertices, -1);
  for (int v = 0; v < inst.num_vertices; ++v) {
    if (inst.patience[v]) probes_left[v] = *inst.patience[v];
  }
  std::vector<std::uint8_t> matched(inst.num_vertices, 0);
  MatchResult result;
  for (Eigen::Index e : order) {
    const GraphEdge& edge = inst.edges[e];
    if (matched[edge.u] || matched[edge.v]) continue;
    if (probes_left[edge.u] == 0 || probes_left[edge.v] == 0) continue;
    if (!rng.bernoulli(std::clamp(y[e], 0.0, 1.0))) continue;
    result.probed.push_back(e);
    if (probes_left[edge.u] > 0) --probes_left[edge.u];
    if (probes_left[edge.v] > 0) --probes_left[edge.v];
    if (rng.bernoulli(edge.prob)) {
      matched[edge.u] = matched[edge.v] = 1;
      result.matches.emplace_back(edge.u, edge.v);
      result.total_weight += edge.weight;
    }
  }
  return result;
}

}  // namespace srr
