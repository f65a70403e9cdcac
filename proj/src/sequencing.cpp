// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/sequencing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "srr/random.hpp"

namespace srr {

void HiringInstance::validate() const {
  if (k < 1 || T < 1) throw std::invalid_argument("hiring instance needs k >= 1 and T >= 1");
  if (w.size() < 1 || w.size() != p.size()) {
    throw std::invalid_argument("hiring instance needs matching nonempty w and p");
  }
  for (Eigen::Index i = 0; i < n(); ++i) {
    if (w[i] < 0.0) throw std::invalid_argument("weights must be nonnegative");
    if (p[i] < 0.0 || p[i] > 1.0) {
      throw std::invalid_argument("acceptance probabilities must lie in [0, 1]");
    }
  }
}

LinearProgram build_hiring_lp(const HiringInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.n();
  LinearProgram lp = LinearProgram::with_bounds(n, 0.0, 1.0);
  lp.objective = inst.w.cwiseProduct(inst.p);
  lp.names.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) lp.names[i] = "y_" + std::to_string(i);
  lp.add_constraint(Eigen::VectorXd::Ones(n), Relation::LessEqual, inst.T);
  lp.add_constraint(inst.p, Relation::LessEqual, inst.k);
  return lp;
}

std::vector<RoundingOutcome> enumerate_offer_roundings(const LpSolution& y, double tol) {
  if (y.status != SolveStatus::Optimal) {
    throw std::invalid_argument("rounding needs an optimal solution");
  }
  const std::vector<Eigen::Index> frac = fractional_indices(y, tol);
  if (frac.size() > 2) {
    throw std::invalid_argument("solution is not basic: more than two fractional offers");
  }
  std::vector<std::uint8_t> base(y.values.size(), 0);
  for (Eigen::Index i = 0; i < y.values.size(); ++i) {
    base[i] = y.values[i] >= 0.5 ? 1 : 0;
  }
  for (Eigen::Index i : frac) base[i] = 0;

  std::vector<RoundingOutcome> outcomes;
  if (frac.empty()) {
    outcomes.push_back({base, 1.0});
  } else if (frac.size() == 1) {
    const double q = y.values[frac[0]];
    auto up = base;
    up[frac[0]] = 1;
    outcomes.push_back({up, q});
    outcomes.push_back({base, 1.0 - q});
  } else {
    const double qa = y.values[frac[0]];
    const double qb = y.values[frac[1]];
    if (std::abs(qa + qb - 1.0) > 1e-6) {
      throw std::invalid_argument("fractional offer pair does not sum to one");
    }
    auto up_a = base, up_b = base;
    up_a[frac[0]] = 1;
    up_b[frac[1]] = 1;
    outcomes.push_back({up_a, qa});
    outcomes.push_back({up_b, 1.0 - qa});
  }
  return outcomes;
}

OfferSet make_offer_set(const std::vector<std::uint8_t>& offer, const Eigen::VectorXd& w) {
  OfferSet set;
  set.offer = offer;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(offer.size()); ++i) {
    if (offer[i]) set.order.push_back(i);
  }
  std::sort(set.order.begin(), set.order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return w[a] != w[b] ? w[a] > w[b] : a < b;
  });
  return set;
}

OfferSet round_offer_set(const LpSolution& y, const HiringInstance& inst, std::uint64_t seed) {
  const auto outcomes = enumerate_offer_roundings(y);
  Rng rng(seed);
  const double u = rng.uniform();
  double cum = 0.0;
  for (const auto& outcome : outcomes) {
    cum += outcome.probability;
    if (u < cum || &outcome == &outcomes.back()) {
      return make_offer_set(outcome.offer, inst.w);
    }
  }
  return make_offer_set(outcomes.back().offer, inst.w);
}

HiringOutcome run_offer_policy(const OfferSet& offers, const HiringInstance& inst,
                               std::uint64_t seed) {
  inst.validate();
  Rng rng(seed);
  HiringOutcome outcome;
  int positions = inst.k;
  for (Eigen::Index i : offers.order) {
    if (positions == 0) break;
    if (rng.bernoulli(inst.p[i])) {
      outcome.hired.push_back(i);
      outcome.total_weight += inst.w[i];
      --positions;
    }
  }
  return outcome;
}

void ProbeInstance::validate() const {
  if (k < 1 || T < 1) throw std::invalid_argument("probe instance needs k >= 1 and T >= 1");
  if (dists.empty()) throw std::invalid_argument("probe instance needs applicants");
  for (const auto& dist : dists) {
    dist.validate();
    if (dist.support[0] < 0.0) {
      throw std::invalid_argument("applicant values must be nonnegative");
    }
  }
}

LinearProgram build_probetopk_lp(const std::vector<DiscreteDistribution>& dists,
                                 double interview_budget, double hire_cap) {
  const Eigen::Index n = static_cast<Eigen::Index>(dists.size());
  // Variables: [x_0..x_{n-1} | z_0..z_{n-1} | t_0..t_{n-1}].
  LinearProgram lp = LinearProgram::with_bounds(3 * n, 0.0, 1.0);
  lp.names.resize(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lp.names[i] = "x_" + std::to_string(i);
    lp.names[n + i] = "z_" + std::to_string(i);
    lp.names[2 * n + i] = "t_" + std::to_string(i);
    lp.objective[2 * n + i] = 1.0;
    lp.upper[2 * n + i] = dists[i].mean();
  }

  Eigen::VectorXd row = Eigen::VectorXd::Zero(3 * n);
  row.segment(n, n).setOnes();
  lp.add_constraint(row, Relation::LessEqual, interview_budget);
  row.setZero();
  row.head(n).setOnes();
  lp.add_constraint(row, Relation::LessEqual, hire_cap);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.setZero();
    row[i] = 1.0;
    row[n + i] = -1.0;
    lp.add_constraint(row, Relation::LessEqual, 0.0);  // x_i <= z_i
  }
  // t_i <= intercept_j * z_i + value_j * x_i, one piece per atom from the top.
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& dist = dists[i];
    double cum_mass = 0.0;
    double cum_integral = 0.0;
    for (Eigen::Index j = dist.support.size() - 1; j >= 0; --j) {
      const double value = dist.support[j];
      const double intercept = cum_integral - value * cum_mass;
      row.setZero();
      row[2 * n + i] = 1.0;
      row[i] = -value;
      row[n + i] = -intercept;
      lp.add_constraint(row, Relation::LessEqual, 0.0);
      cum_mass += dist.mass[j];
      cum_integral += dist.mass[j] * value;
    }
  }
  return lp;
}

ProbePlan solve_probetopk(const ProbeInstance& inst) {
  inst.validate();
  const LinearProgram lp = build_probetopk_lp(inst.dists, inst.T, inst.k);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != SolveStatus::Optimal) {
    throw std::runtime_error("interviewing program did not solve to optimality");
  }
  const Eigen::Index n = inst.n();
  ProbePlan plan;
  plan.hire_prob = sol.values.head(n);
  plan.interview_prob = sol.values.segment(n, n);
  plan.objective_value = sol.objective_value;
  return plan;
}

ProbeReduction reduce_probetopk_to_offering(const ProbePlan& plan, const ProbeInstance& inst) {
  inst.validate();
  ProbeReduction red;
  red.hiring.k = inst.k;
  red.hiring.T = inst.T;
  std::vector<double> w, p;
  for (Eigen::Index i = 0; i < inst.n(); ++i) {
    const double z = plan.interview_prob[i];
    if (z <= 1e-12) continue;  // never interviewed
    const double ratio = std::clamp(plan.hire_prob[i] / z, 0.0, 1.0);
    p.push_back(ratio);
    w.push_back(ratio > 0.0 ? top_p_mean(inst.dists[i], ratio) : 0.0);
    red.thresholds.push_back(quantile_threshold(inst.dists[i], ratio));
    red.applicant.push_back(i);
  }
  if (w.empty()) {
    // Degenerate plan that interviews no one; keep a single dead candidate so
    // downstream LP building stays well-formed.
    w.push_back(0.0);
    p.push_back(0.0);
    red.thresholds.push_back(quantile_threshold(inst.dists[0], 0.0));
    red.applicant.push_back(0);
  }
  red.hiring.w = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  red.hiring.p = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  return red;
}

ProbeOutcome run_probetopk_policy(const OfferSet& offers, const ProbeReduction& reduction,
                                  const ProbeInstance& inst, std::uint64_t seed) {
  Rng rng(seed);
  ProbeOutcome outcome;
  int positions = inst.k;
  for (Eigen::Index c : offers.order) {
    if (positions == 0) break;
    const Eigen::Index i = reduction.applicant[c];
    outcome.interviewed.push_back(i);
    const double draw = inst.dists[i].sample(rng);
    if (accepts(reduction.thresholds[c], draw, rng)) {
      outcome.hired.push_back(i);
      outcome.total_weight += draw;
      --positions;
    }
  }
  return outcome;
}

}  // namespace srr
