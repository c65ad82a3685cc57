#pragma once

// Counter-based random streams.
//
// Every Monte Carlo trial owns a Stream derived from (base_seed, trial index),
// so a trial's draws do not depend on which worker runs it or in what order.
// The generator is Philox4x32-10; the samplers below are written out
// explicitly instead of using <random> distributions so results are identical
// across standard library implementations.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace socsec {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Independent random stream addressed by (seed, stream index).
/// Satisfies std::uniform_random_bit_generator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        index_(index) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 4) refill();
    const std::uint64_t hi = buffer_[used_];
    const std::uint64_t lo = buffer_[used_ + 1];
    used_ += 2;
    return (hi << 32) | lo;
  }

  /// Child stream, e.g. one per eavesdropper inside a trial.
  [[nodiscard]] Stream split(std::uint64_t salt) const {
    const std::uint64_t seed = (std::uint64_t{key_[1]} << 32 | key_[0]) ^ mix(salt + 0x632BE59BD9B4E019ull);
    return Stream(seed, mix(index_ ^ (salt * 0x9E3779B97F4A7C15ull)));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)};
    buffer_ = Philox4x32::generate(ctr, key_);
    ++block_;
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Uniform on [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential with unit mean.
template <class Rng>
double exponential1(Rng& rng) {
  return -std::log1p(-uniform01(rng));
}

/// Standard normal (Box-Muller, one value per call).
template <class Rng>
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Poisson variate by sequential inversion. Large means are split into
/// independent pieces (Poisson additivity) so exp(-mean) never underflows.
template <class Rng>
std::uint64_t poisson(Rng& rng, double mean) {
  constexpr double kChunk = 500.0;
  if (!(mean > 0.0)) return 0;
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double m = mean > kChunk ? kChunk : mean;
    mean -= m;
    const double u = uniform01(rng);
    double p = std::exp(-m);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
      ++k;
      p *= m / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;  // tail exhausted in floating point
      cdf = next;
    }
    total += k;
  }
  return total;
}

}  // namespace socsec
