// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srr {

void DiscreteDistribution::validate() const {
  if (support.size() == 0 || support.size() != mass.size()) {
    throw std::invalid_argument("distribution needs matching nonempty support and mass");
  }
  for (Eigen::Index i = 0; i < support.size(); ++i) {
    if (mass[i] <= 0.0) throw std::invalid_argument("distribution masses must be positive");
    if (i > 0 && support[i] <= support[i - 1]) {
      throw std::invalid_argument("distribution support must be strictly increasing");
    }
  }
  if (std::abs(mass.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution masses must sum to 1");
  }
}

double DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double cum = 0.0;
  for (Eigen::Index i = 0; i < support.size(); ++i) {
    cum += mass[i];
    if (u < cum) return support[i];
  }
  return support[support.size() - 1];
}

double top_p_integral(const DiscreteDistribution& dist, double p) {
  if (p <= 0.0 || p > 1.0 + 1e-12) throw std::invalid_argument("p must lie in (0, 1]");
  p = std::min(p, 1.0);
  double remaining = p;
  double integral = 0.0;
  for (Eigen::Index i = dist.support.size() - 1; i >= 0 && remaining > 0.0; --i) {
    const double take = std::min(remaining, dist.mass[i]);
    integral += take * dist.support[i];
    remaining -= take;
  }
  return integral;
}

double top_p_mean(const DiscreteDistribution& dist, double p) {
  return top_p_integral(dist, p) / std::min(std::max(p, 0.0), 1.0);
}

QuantileThreshold quantile_threshold(const DiscreteDistribution& dist, double p) {
  if (p < 0.0 || p > 1.0 + 1e-12) throw std::invalid_argument("p must lie in [0, 1]");
  if (p <= 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  double above = 0.0;  // strict-above mass accumulated so far
  for (Eigen::Index i = dist.support.size() - 1; i >= 0; --i) {
    if (above + dist.mass[i] >= p - 1e-12) {
      return {dist.support[i], std::min(1.0, (p - above) / dist.mass[i])};
    }
    above += dist.mass[i];
  }
  return {dist.support[0], 1.0};
}

bool accepts(const QuantileThreshold& th, double draw, Rng& rng) {
  if (draw > th.value) return true;
  if (draw == th.value) return rng.bernoulli(th.boundary_prob);
  return false;
}

}  // namespace srr
