#pragma once

#include <complex>
#include <cstdint>

namespace bornforge {

/**
 * Deterministic random source. Every sampling operation in the kernel draws
 * from an explicitly seeded instance; there is no ambient randomness.
 *
 * The generator is splitmix64; normal variates come from a fixed Box-Muller
 * implementation so that identical seeds reproduce identical streams
 * independent of the standard library's distribution internals.
 */
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t next_u64();

  /** Uniform double in [0, 1). */
  double uniform();

  /** Uniform double in [lo, hi). */
  double uniform(double lo, double hi);

  /** Standard normal variate. */
  double normal();

  /** Complex Gaussian with E|z|^2 = 1. */
  std::complex<double> normal_complex();

  /** Uniform index in [0, bound); bound must be positive. */
  std::size_t index(std::size_t bound);

  /**
   * Independent child stream derived from this source's original seed and the
   * stream id. Stable under any number of draws from the parent, so parallel
   * or reordered consumers stay reproducible.
   */
  RandomSource split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bornforge
