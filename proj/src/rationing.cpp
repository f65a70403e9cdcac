// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/rationing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "srr/random.hpp"

namespace srr {

void RationingInstance::validate() const {
  if (k < 1) throw std::invalid_argument("rationing instance needs k >= 1");
  if (x.size() < 1) throw std::invalid_argument("rationing instance needs at least one agent");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) {
      throw std::invalid_argument("need probabilities must lie in [0, 1]");
    }
  }
}

double gamma_fixed_order_k1(const RationingInstance& inst) {
  inst.validate();
  if (inst.k != 1) throw std::invalid_argument("closed form requires k = 1");
  const double head = inst.x.head(inst.n() - 1).sum();
  return 1.0 / (1.0 + head);
}

Eigen::VectorXd single_unit_bit_probabilities(const RationingInstance& inst, double gamma) {
  inst.validate();
  if (inst.k != 1) throw std::invalid_argument("bit probabilities require k = 1");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  Eigen::VectorXd bits(inst.n());
  double prefix = 0.0;
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    const double denom = 1.0 - gamma * prefix;
    if (denom <= 0.0 || gamma > denom + 1e-12) {
      throw std::invalid_argument("gamma infeasible: activation bit probability leaves [0, 1]");
    }
    bits[i] = std::min(1.0, gamma / denom);
    prefix += inst.x[i];
  }
  return bits;
}

OfferTrace run_single_unit_policy(const RationingInstance& inst, double gamma,
                                  std::uint64_t seed) {
  const Eigen::VectorXd bits = single_unit_bit_probabilities(inst, gamma);
  Rng rng(seed);
  OfferTrace trace;
  trace.offered.assign(inst.n(), 0);
  trace.took.assign(inst.n(), 0);
  int units = 1;
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    trace.units_remaining.push_back(units);
    const bool active = rng.bernoulli(bits[i]);
    if (units > 0 && active) {
      trace.offered[i] = 1;
      if (rng.bernoulli(inst.x[i])) {
        trace.took[i] = 1;
        --units;
      }
    }
  }
  trace.units_remaining.push_back(units);
  return trace;
}

Eigen::VectorXd single_unit_offer_probabilities(const RationingInstance& inst, double gamma) {
  const Eigen::VectorXd bits = single_unit_bit_probabilities(inst, gamma);
  Eigen::VectorXd offer(inst.n());
  double survives = 1.0;  // probability the unit is still unclaimed
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    offer[i] = survives * bits[i];
    survives -= offer[i] * inst.x[i];
  }
  return offer;
}

LinearProgram build_kunit_lp(const RationingInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.n();
  const int k = inst.k;
  // Variables: [gamma | alpha(i,l) | beta(i,l)], both matrices agent-major.
  const Eigen::Index nv = 1 + 2 * n * k;
  auto alpha_at = [&](Eigen::Index i, int l) { return 1 + i * k + l; };
  auto beta_at = [&](Eigen::Index i, int l) { return 1 + n * k + i * k + l; };

  LinearProgram lp = LinearProgram::with_bounds(nv, 0.0, 1.0);
  lp.objective[0] = 1.0;
  lp.names.assign(nv, "");
  lp.names[0] = "gamma";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int l = 0; l < k; ++l) {
      lp.names[alpha_at(i, l)] =
          "alpha_" + std::to_string(i) + "_" + std::to_string(l + 1);
      lp.names[beta_at(i, l)] = "beta_" + std::to_string(i) + "_" + std::to_string(l + 1);
    }
  }

  Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
  // Offer totals: sum_l alpha(i,l) = gamma.
  for (Eigen::Index i = 0; i < n; ++i) {
    row.setZero();
    row[0] = -1.0;
    for (int l = 0; l < k; ++l) row[alpha_at(i, l)] = 1.0;
    lp.add_constraint(row, Relation::Equal, 0.0);
  }
  // Initial state: all k units present.
  for (int l = 0; l < k; ++l) {
    row.setZero();
    row[beta_at(0, l)] = 1.0;
    lp.add_constraint(row, Relation::Equal, l == k - 1 ? 1.0 : 0.0);
  }
  // Mass balance: beta(i,l) = beta(i-1,l) - alpha(i-1,l) x + alpha(i-1,l+1) x.
  for (Eigen::Index i = 1; i < n; ++i) {
    for (int l = 0; l < k; ++l) {
      row.setZero();
      row[beta_at(i, l)] = 1.0;
      row[beta_at(i - 1, l)] = -1.0;
      row[alpha_at(i - 1, l)] = inst.x[i - 1];
      if (l + 1 < k) row[alpha_at(i - 1, l + 1)] = -inst.x[i - 1];
      lp.add_constraint(row, Relation::Equal, 0.0);
    }
  }
  // alpha(i,l) <= beta(i,l).
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int l = 0; l < k; ++l) {
      row.setZero();
      row[alpha_at(i, l)] = 1.0;
      row[beta_at(i, l)] = -1.0;
      lp.add_constraint(row, Relation::LessEqual, 0.0);
    }
  }
  return lp;
}

namespace {

// Greedy top-down fill for a target gamma. Returns false when some agent
// cannot be promised gamma; on success outputs the filled plan matrices.
bool fill_greedy_plan(const RationingInstance& inst, double gamma, Eigen::MatrixXd* alpha,
                      Eigen::MatrixXd* beta) {
  const Eigen::Index n = inst.n();
  const int k = inst.k;
  alpha->setZero(n, k);
  beta->setZero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0) {
      (*beta)(0, k - 1) = 1.0;
    } else {
      for (int l = 0; l < k; ++l) {
        double mass = (*beta)(i - 1, l) - (*alpha)(i - 1, l) * inst.x[i - 1];
        if (l + 1 < k) mass += (*alpha)(i - 1, l + 1) * inst.x[i - 1];
        (*beta)(i, l) = std::max(0.0, mass);
      }
    }
    double rem = gamma;
    for (int l = k - 1; l >= 0 && rem > 0.0; --l) {
      const double a = std::min(rem, (*beta)(i, l));
      (*alpha)(i, l) = a;
      rem -= a;
    }
    if (rem > 1e-12) return false;
  }
  return true;
}

}  // namespace

KUnitPlan solve_kunit_plan(const RationingInstance& inst) {
  inst.validate();
  KUnitPlan plan;
  Eigen::MatrixXd alpha, beta;
  double lo = 0.0, hi = 1.0;
  if (fill_greedy_plan(inst, 1.0, &alpha, &beta)) {
    lo = 1.0;
  } else {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (fill_greedy_plan(inst, mid, &alpha, &beta)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  fill_greedy_plan(inst, lo, &plan.alpha, &plan.beta);
  plan.gamma = lo;
  return plan;
}

OfferTrace run_kunit_policy(const KUnitPlan& plan, const RationingInstance& inst,
                            std::uint64_t seed) {
  inst.validate();
  Rng rng(seed);
  OfferTrace trace;
  trace.offered.assign(inst.n(), 0);
  trace.took.assign(inst.n(), 0);
  int units = inst.k;
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    trace.units_remaining.push_back(units);
    if (units > 0) {
      const int l = units - 1;
      const double b = plan.beta(i, l);
      const double p = b > 0.0 ? std::clamp(plan.alpha(i, l) / b, 0.0, 1.0) : 0.0;
      if (rng.bernoulli(p)) {
        trace.offered[i] = 1;
        if (rng.bernoulli(inst.x[i])) {
          trace.took[i] = 1;
          --units;
        }
      }
    }
  }
  trace.units_remaining.push_back(units);
  return trace;
}

Eigen::MatrixXd kunit_state_probabilities(const KUnitPlan& plan, const RationingInstance& inst) {
  const Eigen::Index n = inst.n();
  const int k = inst.k;
  Eigen::MatrixXd state = Eigen::MatrixXd::Zero(n, k);
  state(0, k - 1) = 1.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (int l = 0; l < k; ++l) state(i + 1, l) = state(i, l);
    for (int l = 0; l < k; ++l) {
      const double b = plan.beta(i, l);
      const double offer_cond = b > 0.0 ? std::clamp(plan.alpha(i, l) / b, 0.0, 1.0) : 0.0;
      const double taken = state(i, l) * offer_cond * inst.x[i];
      state(i + 1, l) -= taken;
      if (l > 0) state(i + 1, l - 1) += taken;
    }
  }
  return state;
}

Eigen::VectorXd kunit_offer_probabilities(const KUnitPlan& plan, const RationingInstance& inst) {
  const Eigen::MatrixXd state = kunit_state_probabilities(plan, inst);
  Eigen::VectorXd offer = Eigen::VectorXd::Zero(inst.n());
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    for (int l = 0; l < inst.k; ++l) {
      const double b = plan.beta(i, l);
      const double offer_cond = b > 0.0 ? std::clamp(plan.alpha(i, l) / b, 0.0, 1.0) : 0.0;
      offer[i] += state(i, l) * offer_cond;
    }
  }
  return offer;
}

OfferTrace run_random_order_policy(const RationingInstance& inst, std::uint64_t seed) {
  inst.validate();
  if (inst.k != 1) throw std::invalid_argument("random-order policy requires k = 1");
  if (!inst.supply_meets_demand()) {
    throw std::invalid_argument("random-order policy requires sum(x) <= 1");
  }
  const Eigen::Index n = inst.n();
  Rng rng(seed);
  std::vector<double> arrival(n);
  for (Eigen::Index i = 0; i < n; ++i) arrival[i] = rng.uniform();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return arrival[a] != arrival[b] ? arrival[a] < arrival[b] : a < b;
  });

  OfferTrace trace;
  trace.offered.assign(n, 0);
  trace.took.assign(n, 0);
  int units = 1;
  for (Eigen::Index i : order) {
    trace.units_remaining.push_back(units);
    const bool active = rng.bernoulli(std::exp(-arrival[i] * inst.x[i]));
    if (units > 0 && active) {
      trace.offered[i] = 1;
      if (rng.bernoulli(inst.x[i])) {
        trace.took[i] = 1;
        --units;
      }
    }
  }
  trace.units_remaining.push_back(units);
  return trace;
}

double guarantee_random_order(int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const double kd = static_cast<double>(k);
  return 1.0 - std::exp(-kd + kd * std::log(kd) - std::lgamma(kd + 1.0));
}

double two_unit_fixed_order_guarantee() {
  const auto residual = [](double g) { return std::exp(1.0 / g - 3.0) - (2.0 / g - 3.0); };
  double lo = 0.5, hi = 0.9;  // residual changes sign on this bracket
  if (!(residual(lo) < 0.0 && residual(hi) > 0.0)) {
    throw std::logic_error("fixed-point bracket does not straddle a sign change");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double correlation_gap_ratio(const Eigen::VectorXd& x, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const double total = x.sum();
  if (total <= 0.0) throw std::invalid_argument("sum of x must be positive");
  // Count distribution capped at k; the cap loses nothing for E[min{., k}].
  Eigen::VectorXd count = Eigen::VectorXd::Zero(k + 1);
  count[0] = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double p = x[i];
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("x entries must lie in [0, 1]");
    for (int c = k; c >= 1; --c) {
      count[c] = count[c] * (c == k ? 1.0 : (1.0 - p)) + count[c - 1] * p;
    }
    count[0] *= 1.0 - p;
  }
  double expectation = 0.0;
  for (int c = 1; c <= k; ++c) expectation += c * count[c];
  return expectation / total;
}

}  // namespace srr
