#include "bornforge/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bornforge {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t RandomSource::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomSource::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> RandomSource::normal_complex() {
  double re = normal();
  double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

std::size_t RandomSource::index(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("index bound must be positive");
  return static_cast<std::size_t>(next_u64() % bound);
}

RandomSource RandomSource::split(std::uint64_t stream) const {
  return RandomSource(mix64(seed_ ^ ((stream + 1) * kGamma)));
}

}  // namespace bornforge
