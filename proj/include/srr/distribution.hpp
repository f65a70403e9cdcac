// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_DISTRIBUTION_HPP
#define SRR_DISTRIBUTION_HPP

#include <Eigen/Core>

#include "srr/random.hpp"

namespace srr {

// Finite-support probability mass over real values.
struct DiscreteDistribution {
  Eigen::VectorXd support;  // strictly increasing
  Eigen::VectorXd mass;     // positive, sums to 1

  void validate() const;
  double mean() const { return support.dot(mass); }
  double sample(Rng& rng) const;
};

// Average of the top-p probability mass, splitting the boundary atom
// fractionally; equals (1/p) * integral of the quantile function over the
// top p quantiles. Requires 0 < p <= 1.
double top_p_mean(const DiscreteDistribution& dist, double p);

// p * top_p_mean(p): the un-normalized top-p integral. Concave and piecewise
// linear in p with breakpoints at the cumulative masses from the top.
double top_p_integral(const DiscreteDistribution& dist, double p);

// Acceptance rule that fires with probability exactly p on a fresh draw:
// accept when the draw exceeds `value`, and with probability `boundary_prob`
// when it equals `value`.
struct QuantileThreshold {
  double value;
  double boundary_prob;
};

QuantileThreshold quantile_threshold(const DiscreteDistribution& dist, double p);

bool accepts(const QuantileThreshold& th, double draw, Rng& rng);

}  // namespace srr

#endif  // SRR_DISTRIBUTION_HPP
