#pragma once

#include <cstdint>

namespace nhwave {

/// SplitMix64 evaluated as a counter-based generator: the i-th word depends
/// only on (seed, i), so realizations are reproducible across platforms and
/// can be drawn in any order.
constexpr std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Top 53 bits as a double in [0, 1).
constexpr double unit_interval(std::uint64_t word) noexcept {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace nhwave
