#pragma once

#include <cstdint>
#include <random>

namespace linenet {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a tuple of counters.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream (a, b, c) under `master`. Every random stream in the
/// simulator is keyed this way so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Seeded generator with portable helpers. The engine is mt19937_64, whose
/// output sequence is fixed by the standard; the helpers below avoid the
/// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform integer in [0, n). n must be nonzero.
  std::uint64_t uniform(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Fair coin, consuming one bit of a buffered 64-bit draw.
  bool coin() {
    if (coin_left_ == 0) {
      coin_bits_ = engine_();
      coin_left_ = 64;
    }
    bool b = coin_bits_ & 1u;
    coin_bits_ >>= 1;
    --coin_left_;
    return b;
  }

  /// Number of failures before the first success of a Bernoulli(p) trial
  /// sequence; used to skip through sparse i.i.d. selections.
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
  std::uint64_t coin_bits_ = 0;
  int coin_left_ = 0;
};

}  // namespace linenet
