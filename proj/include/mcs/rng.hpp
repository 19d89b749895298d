#pragma once

#include <cstdint>
#include <random>

namespace mcs {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent generator seed for (seed, stream_index). Trials seeded this
/// way give identical results no matter how they are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream_index + 0x632BE59BD9B4E019ull));
}

/// Uniform double in [0, 1) with 53 random bits. mt19937_64 output is
/// specified bit-exactly by the standard, so the stream is reproducible
/// across platforms.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

} // namespace mcs
