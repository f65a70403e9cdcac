// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_SEQUENCING_HPP
#define SRR_SEQUENCING_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "srr/distribution.hpp"
#include "srr/lp.hpp"

namespace srr {

// A firm fills k positions with up to T sequential offers; candidate i has
// value w[i] and accepts independently with probability p[i].
struct HiringInstance {
  int k = 1;
  int T = 1;
  Eigen::VectorXd w;
  Eigen::VectorXd p;

  Eigen::Index n() const { return w.size(); }
  void validate() const;
};

// Rounded offer designations plus the order in which offers are sent:
// decreasing weight among designated candidates, ties by index.
struct OfferSet {
  std::vector<std::uint8_t> offer;
  std::vector<Eigen::Index> order;
};

// max sum w_i p_i y_i  s.t.  sum y_i <= T,  sum p_i y_i <= k,  0 <= y <= 1.
LinearProgram build_hiring_lp(const HiringInstance& inst);

struct RoundingOutcome {
  std::vector<std::uint8_t> offer;
  double probability;
};

// The full support of the offer-set rounding applied to a basic solution:
// one outcome when y is integral, two otherwise (a single fractional
// coordinate is an independent coin; a fractional pair sums to one and
// exactly one of the two is rounded up). Rejects solutions with more than
// two fractional coordinates.
std::vector<RoundingOutcome> enumerate_offer_roundings(const LpSolution& y,
                                                       double tol = 1e-7);

// Sample one rounding outcome and attach the offer order.
OfferSet round_offer_set(const LpSolution& y, const HiringInstance& inst, std::uint64_t seed);

OfferSet make_offer_set(const std::vector<std::uint8_t>& offer, const Eigen::VectorXd& w);

struct HiringOutcome {
  std::vector<Eigen::Index> hired;
  double total_weight = 0.0;
};

// Send offers in the stored order while positions remain; each offered
// candidate accepts independently with probability p[i].
HiringOutcome run_offer_policy(const OfferSet& offers, const HiringInstance& inst,
                               std::uint64_t seed);

// Applicants whose value is revealed only by an interview.
struct ProbeInstance {
  int k = 1;
  int T = 1;
  std::vector<DiscreteDistribution> dists;

  Eigen::Index n() const { return static_cast<Eigen::Index>(dists.size()); }
  void validate() const;
};

// Interview probabilities z, hire probabilities x, and the optimal value of
// the interviewing program.
struct ProbePlan {
  Eigen::VectorXd interview_prob;  // z
  Eigen::VectorXd hire_prob;       // x
  double objective_value = 0.0;
};

// LP encoding of the interviewing program: each applicant's concave
// perspective term z * g(x/z) is modeled by an auxiliary variable bounded by
// one linear piece per support atom. Fractional caps are allowed so the
// budget rows can be stressed directly in tests.
LinearProgram build_probetopk_lp(const std::vector<DiscreteDistribution>& dists,
                                 double interview_budget, double hire_cap);

ProbePlan solve_probetopk(const ProbeInstance& inst);

// Reduction of the interviewing problem to sequential offering: interviewing
// applicant i becomes an offer with acceptance probability p_i = x_i / z_i
// and value w_i = top_p_mean(dist_i, p_i); the thresholds make the executed
// policy hire exactly when the realized value lands in the top-p_i quantile.
struct ProbeReduction {
  HiringInstance hiring;
  std::vector<QuantileThreshold> thresholds;  // aligned with hiring candidates
  std::vector<Eigen::Index> applicant;        // original index per candidate
};

ProbeReduction reduce_probetopk_to_offering(const ProbePlan& plan, const ProbeInstance& inst);

struct ProbeOutcome {
  std::vector<Eigen::Index> interviewed;  // original applicant indices, in order
  std::vector<Eigen::Index> hired;
  double total_weight = 0.0;  // realized values of hired applicants
};

// Interview designated applicants in the stored order, hiring on threshold
// acceptance, until k positions fill.
ProbeOutcome run_probetopk_policy(const OfferSet& offers, const ProbeReduction& reduction,
                                  const ProbeInstance& inst, std::uint64_t seed);

}  // namespace srr

#endif  // SRR_SEQUENCING_HPP
