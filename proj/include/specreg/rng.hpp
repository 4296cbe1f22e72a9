#pragma once

#include <cstdint>

namespace specreg {

// SplitMix64. Chosen for experiment seeding because its output is a pure
// function of the 64-bit state: the same seed yields the same kernel bytes
// on every platform and toolchain, which the regression suite relies on.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Top 53 bits mapped onto [0, 1); every value is exactly representable.
    double uniform() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    // Shifted variant used for solver start vectors.
    double centered() { return uniform() - 0.5; }
};

} // namespace specreg
