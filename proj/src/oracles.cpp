// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "srr/random.hpp"

namespace srr {

OracleValue optimal_adaptive_hiring(const HiringInstance& inst) {
  inst.validate();
  const int n = static_cast<int>(inst.n());
  if (n > 12) throw std::invalid_argument("adaptive hiring oracle is guarded to n <= 12");
  const std::size_t num_masks = static_cast<std::size_t>(1) << n;
  // value[mask][kl]: mask = candidates still unoffered, kl = positions left.
  std::vector<std::vector<double>> value(num_masks, std::vector<double>(inst.k + 1, -1.0));
  long states = 0;

  // Offers made so far are implied by the mask, so the remaining offer budget
  // is T - (n - popcount(mask)).
  auto solve = [&](auto&& self, std::uint32_t mask, int kl) -> double {
    double& memo = value[mask][kl];
    if (memo >= 0.0) return memo;
    ++states;
    const int offers_left = inst.T - (n - __builtin_popcount(mask));
    if (mask == 0 || kl == 0 || offers_left <= 0) return memo = 0.0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      if (((mask >> i) & 1u) == 0) continue;
      const std::uint32_t rest = mask & ~(1u << i);
      const double v = inst.p[i] * (inst.w[i] + self(self, rest, kl - 1)) +
                       (1.0 - inst.p[i]) * self(self, rest, kl);
      best = std::max(best, v);
    }
    return memo = best;
  };

  OracleValue oracle;
  oracle.method = OracleMethod::ExactDp;
  oracle.value = solve(solve, static_cast<std::uint32_t>(num_masks - 1), inst.k);
  oracle.state_count = states;
  return oracle;
}

OracleValue offline_topk_value(const Eigen::VectorXd& w, const Eigen::VectorXd& p, int k,
                               TopkMode mode, long replications, std::uint64_t seed) {
  const Eigen::Index n = w.size();
  if (n != p.size() || n == 0) throw std::invalid_argument("weights and probabilities mismatch");
  if (k < 1) throw std::invalid_argument("k must be positive");
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return w[a] != w[b] ? w[a] > w[b] : a < b; });

  OracleValue oracle;
  if (mode == TopkMode::Exact) {
    if (n > 20) throw std::invalid_argument("exact offline top-k is guarded to n <= 20");
    // Agent ranked r (by weight) lands in the top k iff it materializes and
    // fewer than k higher-ranked agents materialize. `fewer[c]` tracks the
    // count distribution of higher-ranked materializations over 0..k-1; mass
    // reaching k drops out of the array.
    std::vector<double> fewer(static_cast<std::size_t>(k), 0.0);
    fewer[0] = 1.0;
    double total = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const Eigen::Index i = order[r];
      double mass_below_k = 0.0;
      for (int c = 0; c < k; ++c) mass_below_k += fewer[c];
      total += w[i] * p[i] * mass_below_k;
      for (int c = k - 1; c >= 1; --c) fewer[c] = fewer[c] * (1.0 - p[i]) + fewer[c - 1] * p[i];
      fewer[0] *= 1.0 - p[i];
      oracle.state_count += k;
    }
    oracle.value = total;
    oracle.method = OracleMethod::ExactDp;
  } else {
    double total = 0.0;
    std::vector<double> realized;
    for (long r = 0; r < replications; ++r) {
      Rng rng(replication_seed(seed, static_cast<std::uint64_t>(r)));
      realized.clear();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (rng.bernoulli(p[i])) realized.push_back(w[i]);
      }
      std::sort(realized.begin(), realized.end(), std::greater<>());
      for (std::size_t j = 0; j < realized.size() && j < static_cast<std::size_t>(k); ++j) {
        total += realized[j];
      }
    }
    oracle.value = total / static_cast<double>(replications);
    oracle.method = OracleMethod::MonteCarlo;
    oracle.state_count = replications;
  }
  return oracle;
}

OracleValue optimal_online_matching(const MatchingInstance& inst) {
  inst.validate();
  const int m = static_cast<int>(inst.m());
  const int n = static_cast<int>(inst.n());
  if (m > 6 || n > 10) throw std::invalid_argument("online matching oracle is guarded to m <= 6, n <= 10");
  const std::size_t num_masks = static_cast<std::size_t>(1) << m;
  // value[i][mask]: expected reward from agent i on with available set mask.
  std::vector<std::vector<double>> value(n + 1, std::vector<double>(num_masks, 0.0));
  long states = 0;
  for (int i = n - 1; i >= 0; --i) {
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
      ++states;
      const double skip = value[i + 1][mask];
      double best = skip;
      for (int j = 0; j < m; ++j) {
        if (((mask >> j) & 1u) == 0) continue;
        const double take =
            inst.w(j, i) + value[i + 1][mask & ~(static_cast<std::size_t>(1) << j)];
        best = std::max(best, take);
      }
      value[i][mask] = inst.p[i] * best + (1.0 - inst.p[i]) * skip;
    }
  }
  OracleValue oracle;
  oracle.value = value[0][num_masks - 1];
  oracle.method = OracleMethod::ExactDp;
  oracle.state_count = states;
  return oracle;
}

OracleValue optimal_knapsack_policy(const KnapsackInstance& inst) {
  inst.validate();
  const int n = static_cast<int>(inst.n());
  const int T = inst.horizon;
  if (n > 8 || T > 10) {
    throw std::invalid_argument("knapsack oracle is guarded to n <= 8, T <= 10");
  }
  const std::size_t num_masks = static_cast<std::size_t>(1) << n;
  // value[mask][t]: optimal expected further weight when the server is idle
  // at time t with unstarted set mask.
  std::vector<std::vector<double>> value(num_masks, std::vector<double>(T + 2, -1.0));
  long states = 0;

  auto solve = [&](auto&& self, std::uint32_t mask, int t) -> double {
    if (t > T || mask == 0) return 0.0;
    double& memo = value[mask][t];
    if (memo >= 0.0) return memo;
    ++states;
    double best = self(self, mask, t + 1);  // idle one step
    for (int i = 0; i < n; ++i) {
      if (((mask >> i) & 1u) == 0) continue;
      const std::uint32_t rest = mask & ~(1u << i);
      double v = 0.0;
      for (const auto& outcome : inst.jobs[i]) {
        const bool completes = outcome.duration <= T - t + 1;
        v += outcome.prob * ((completes ? outcome.weight : 0.0) +
                             self(self, rest, t + outcome.duration));
      }
      best = std::max(best, v);
    }
    return memo = best;
  };

  OracleValue oracle;
  oracle.value = solve(solve, static_cast<std::uint32_t>(num_masks - 1), 1);
  oracle.method = OracleMethod::ExactDp;
  oracle.state_count = states;
  return oracle;
}

double poisson_binomial_min_k(const Eigen::VectorXd& x, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const Eigen::Index n = x.size();
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  pmf[0] = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = x[i];
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("x entries must lie in [0, 1]");
    for (Eigen::Index c = i + 1; c >= 1; --c) {
      pmf[c] = pmf[c] * (1.0 - p) + pmf[c - 1] * p;
    }
    pmf[0] *= 1.0 - p;
  }
  double expectation = 0.0;
  for (std::size_t c = 1; c < pmf.size(); ++c) {
    expectation += std::min<double>(static_cast<double>(c), k) * pmf[c];
  }
  return expectation;
}

}  // namespace srr
