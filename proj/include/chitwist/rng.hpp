#pragma once

#include <cstdint>

namespace chitwist {

/**
 * Deterministic splitmix64 stream. Used for every randomized sweep so
 * that a (seed, draw sequence) pair reproduces bit-for-bit on any
 * platform; std::uniform_int_distribution is implementation-defined and
 * would not.
 */
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, n) by rejection; n must be positive.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform value in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

  private:
    std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

} // namespace chitwist
