#pragma once

#include <cstdint>

namespace partva::rng {

// Finalizing mixer from SplitMix64 (Steele, Lea & Flood 2014).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Sub-stream seed for element `index` of a run seeded with `master`.
// This is SplitMix64 evaluated at counter position index+1, so sub-seeds
// are decorrelated and any element can be reached without stepping.
inline constexpr std::uint64_t split(std::uint64_t master, std::uint64_t index) {
    return mix64(master + (index + 1) * kGolden);
}

// SplitMix64 stream. Distributions are hand-rolled: the standard library
// leaves std::uniform_*_distribution implementation-defined, and generated
// content must replay bit-exactly.
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() { return mix64(state_ += kGolden); }

    // Uniform integer in [0, n), n >= 1. Multiply-shift bound; the bias of
    // ~n/2^64 is irrelevant next to the determinism requirement.
    constexpr std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    constexpr bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::uint64_t state_;
};

}  // namespace partva::rng
