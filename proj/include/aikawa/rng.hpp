// Deterministic RNG helpers. std::uniform_*_distribution output is
// implementation-defined, so bounded draws are rolled by hand to keep
// results reproducible across toolchains.
#pragma once

#include <cstdint>
#include <random>

namespace aikawa {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed), seed_mix_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform integer in [0, n), rejection-sampled.
  std::int64_t below(std::int64_t n) {
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % un);
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return static_cast<std::int64_t>(v % un);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Derive an independent child stream (for per-trial determinism).
  Rng child(std::uint64_t tag) const {
    return Rng(seed_mix_ ^ (tag * 0x9e3779b97f4a7c15ull));
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = 0;
};

}  // namespace aikawa
