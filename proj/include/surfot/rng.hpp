#pragma once

#include <cstdint>

namespace surfot {

// All randomness in the pipeline flows from a single 64-bit seed. Each stage
// draws its own sub-seed through splitmix64 so that, e.g., changing the
// number of quadrature nodes never perturbs the surface sampling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

enum class RngStage : std::uint64_t {
    sample_a = 1,
    sample_b = 2,
    quadrature = 3,
    trials = 4,
};

inline std::uint64_t stage_seed(std::uint64_t seed, RngStage stage) {
    return splitmix64(seed + 0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(stage));
}

// Multiply-shift reduction of a random word to [0, n). The slight modulo
// bias (< n/2^64) is irrelevant here; unlike std::uniform_int_distribution
// the result is identical on every platform.
inline std::uint64_t bounded(std::uint64_t word, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(word) * static_cast<unsigned __int128>(n)) >> 64);
}

// Top 53 bits -> double in [0, 1).
inline double to_unit(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

} // namespace surfot
