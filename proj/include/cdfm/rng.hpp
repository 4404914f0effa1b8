#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cdfm {

// Deterministic random stream. All samplers are implemented on top of the
// raw engine output so that a fixed seed reproduces the exact same doubles
// on every platform and compiler (the std::* distributions make no such
// guarantee). Parallel tasks must each own a stream derived via
// derive_seed, never share one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in {0, ..., n-1}; n >= 1.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller (no state carried between calls).
  double normal();
  double normal(double mean, double stddev);
  Eigen::VectorXd normal_vector(int n);

  bool bernoulli(double p) { return uniform() < p; }

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);
  // Beta(a, b); a, b > 0.
  double beta(double a, double b);

  // Index sampled with probability weights[i] / sum(weights).
  // Weights must be nonnegative with a positive sum.
  int discrete(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

// Mixes an arbitrary list of values into a child seed (splitmix64 finalizer
// applied to a running hash). Used to give grid cells, replicates and tree
// nodes independent streams that do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0x9e3779b97f4a7c15ULL,
                          std::uint64_t c = 0x2545f4914f6cdd1dULL);

}  // namespace cdfm
