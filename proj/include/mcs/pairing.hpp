#pragma once

#include <cstdint>
#include <utility>

namespace mcs {

/// Cantor pairing: a bijection N x N -> N along diagonals,
/// pi(a, b) = (a+b)(a+b+1)/2 + b.
constexpr std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s * (s + 1) / 2 + b;
}

/// Exact integer floor(sqrt(n)). Avoids floating-point rounding for large n.
constexpr std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    std::uint64_t x = n, y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

/// Inverse of cantor_pair: the unique (a, b) with pi(a, b) == z.
constexpr std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    std::uint64_t w = (isqrt(8 * z + 1) - 1) / 2;
    std::uint64_t t = w * (w + 1) / 2;
    std::uint64_t b = z - t;
    return {w - b, b};
}

} // namespace mcs
