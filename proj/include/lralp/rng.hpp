#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace lralp {

/**
 * Deterministic random number helpers.
 *
 * std::uniform_real_distribution and friends are implementation-defined, so
 * seeded runs would not be reproducible across standard libraries. Everything
 * random in this project draws through this wrapper instead, which maps
 * mt19937_64 output to doubles with fixed arithmetic.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, ..., n-1} by rejection.
  int uniform_int(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<int>(draw % bound);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// One draw from the categorical distribution given by `weights`
  /// (nonnegative, need not be normalized), via inverse CDF.
  int categorical(const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    double target = uniform() * total;
    for (int i = 0; i < weights.size(); ++i) {
      target -= weights(i);
      if (target < 0.0) return i;
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// Derives an independent stream, e.g. one per worker or per state.
  Rng fork(std::uint64_t stream) {
    return Rng(engine_() ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lralp
