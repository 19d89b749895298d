#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace mcs {

/// C(n, k), saturating at uint64 max instead of overflowing.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // integral at every step
        if (r > kMax) return kMax;
    }
    return static_cast<std::uint64_t>(r);
}

/// Visits every k-combination of {0..n-1} as an ascending index vector, in
/// lexicographic order. `fn` returns false to stop; the function returns
/// true iff enumeration completed.
inline bool for_each_combination(std::size_t n, std::size_t k,
                                 const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!fn(idx)) return false;
        // advance
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return true;
        }
        if (k == 0) return true;
    }
}

/// Visits every ascending index tuple of size <= max_size over {0..n-1} in
/// lexicographic sequence order: (), (0), (0,1), (0,1,2), ..., (1), ...
/// This is the tie-break order used by subsample enumerations.
inline bool for_each_index_tuple_upto(
    std::size_t n, std::size_t max_size,
    const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> prefix;
    std::function<bool(std::size_t)> rec = [&](std::size_t next) {
        if (!fn(prefix)) return false;
        if (prefix.size() == max_size) return true;
        for (std::size_t i = next; i < n; ++i) {
            prefix.push_back(i);
            if (!rec(i + 1)) return false;
            prefix.pop_back();
        }
        return true;
    };
    return rec(0);
}

} // namespace mcs
