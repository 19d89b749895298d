#pragma once

// Test-only feasibility oracle for the (p->q->r) property, independent of
// the backtracking search: breadth-first reachability over the set of
// covered-p-subset bitmasks. Folding in every possible eta value for one
// q-subset per level exhausts the full table space implicitly, with no
// pruning and no induced sigma.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

inline bool pqr_feasible_by_reachability(unsigned n, unsigned p, unsigned q, unsigned r,
                                         unsigned budget) {
    std::vector<std::uint32_t> psubs, qsubs, cands;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        int pc = std::popcount(m);
        if (pc == static_cast<int>(p)) psubs.push_back(m);
        if (pc == static_cast<int>(q)) qsubs.push_back(m);
        if (pc <= static_cast<int>(budget)) cands.push_back(m);
    }
    if (psubs.empty()) return true;
    if (psubs.size() > 20) throw std::runtime_error("oracle limited to 20 p-subsets");

    std::vector<std::uint32_t> cover(qsubs.size() * cands.size(), 0);
    for (std::size_t qi = 0; qi < qsubs.size(); ++qi)
        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
            std::uint32_t bits = 0;
            for (std::size_t si = 0; si < psubs.size(); ++si) {
                bool subset = (qsubs[qi] & ~psubs[si]) == 0;
                if (subset && std::popcount(cands[ci] & psubs[si]) >= static_cast<int>(r))
                    bits |= 1u << si;
            }
            cover[qi * cands.size() + ci] = bits;
        }

    std::size_t states = std::size_t{1} << psubs.size();
    std::vector<char> cur(states, 0), nxt(states, 0);
    cur[0] = 1;
    for (std::size_t qi = 0; qi < qsubs.size(); ++qi) {
        std::fill(nxt.begin(), nxt.end(), 0);
        const std::uint32_t* row = &cover[qi * cands.size()];
        for (std::size_t st = 0; st < states; ++st) {
            if (!cur[st]) continue;
            for (std::size_t ci = 0; ci < cands.size(); ++ci) nxt[st | row[ci]] = 1;
        }
        cur.swap(nxt);
    }
    return cur[states - 1] != 0;
}
