#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "mcs/combinatorics.hpp"
#include "mcs/emx.hpp"
#include "mcs/error.hpp"

namespace mcs {

/// Brute-force VC dimension of an extensional class: the size of the
/// largest pool subset on which every 0/1 pattern is realized by some
/// concept. Returns -1 for a class with no concepts (nothing, not even the
/// empty set, is shattered).
inline int vc_dimension(const ConceptClass& F) {
    if (F.kind() != ConceptClass::Kind::extensional)
        throw error(errc::config_error, "vc_dimension requires an extensional class");
    const auto& pool = F.pool();
    const auto& concepts = F.concepts();
    if (concepts.empty()) return -1;

    // a set of size s needs 2^s distinct patterns, so s <= log2(|concepts|)
    std::size_t max_s = 0;
    while ((std::size_t{1} << (max_s + 1)) <= concepts.size() && max_s + 1 <= pool.size())
        ++max_s;

    int best = 0;
    for (std::size_t s = 1; s <= max_s; ++s) {
        bool found = false;
        for_each_combination(pool.size(), s, [&](const std::vector<std::size_t>& idx) {
            std::unordered_set<std::uint64_t> patterns;
            for (const auto& h : concepts) {
                std::uint64_t mask = 0;
                for (std::size_t b = 0; b < s; ++b)
                    if (std::binary_search(h.begin(), h.end(), pool[idx[b]]))
                        mask |= std::uint64_t{1} << b;
                patterns.insert(mask);
                if (patterns.size() == (std::uint64_t{1} << s)) break;
            }
            if (patterns.size() == (std::uint64_t{1} << s)) {
                found = true;
                return false;
            }
            return true;
        });
        if (!found) break;
        best = static_cast<int>(s);
    }
    return best;
}

} // namespace mcs
