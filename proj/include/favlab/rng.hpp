#pragma once

#include <cstdint>

namespace favlab {

// Splittable counter-based generator (splitmix-style, see README "Random
// numbers" for the exact algorithm). All randomized components derive their
// draws from these three functions only, so seeds reproduce across
// implementations and thread schedules.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// i-th draw of the stream identified by `seed` (counter-based; no state).
constexpr std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t i) {
    return mix64(seed + (i + 1) * kGolden);
}

// Derive a child key from a node key (lane = child index).
constexpr std::uint64_t split_key(std::uint64_t key, std::uint64_t lane) {
    return mix64(key + (lane + 1) * kGolden);
}

// Uniform double in [0, 1) from 64 random bits.
constexpr double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace favlab
