// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_RANDOM_HPP
#define SRR_RANDOM_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace srr {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based derivation: replication r of a master seed gets the same
// stream no matter which worker runs it or in what order.
inline std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// mt19937_64 is fully specified by the standard, and we avoid
// std::uniform_real_distribution / std::shuffle whose outputs are
// implementation-defined, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : engine_() % n; }

  // Index into probs by cumulative inversion; -1 for the residual mass.
  int categorical(const Eigen::VectorXd& probs) {
    const double u = uniform();
    double cum = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return -1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace srr

#endif  // SRR_RANDOM_HPP
