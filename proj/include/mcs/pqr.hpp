#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcs/combinatorics.hpp"
#include "mcs/error.hpp"

namespace mcs {

/// Subsets of {0..n-1} as bitmasks. Enumeration everywhere is colex: among
/// masks of equal popcount, ascending numeric order.
using Mask = std::uint32_t;

/// A bounded-reconstruction decision instance on an n-element pool: does
/// every p-subset S admit a q-subset sigma(S) of itself with
/// |eta(sigma(S)) cap S| >= r, where |eta(T)| <= budget? The budget keeps
/// the finite question nontrivial: with eta unrestricted, eta == pool is
/// always a solution.
struct PqrInstance {
    unsigned n = 0;
    unsigned p = 0;
    unsigned q = 0;
    unsigned r = 0;
    unsigned budget = 0;
    std::uint64_t cap = 10'000'000;  // enumeration cap on C(n, p)
};

struct PqrCertificate {
    std::vector<std::pair<Mask, Mask>> sigma;  // p-subset -> q-subset of it
    std::vector<std::pair<Mask, Mask>> eta;    // used q-subsets -> reconstruction
};

enum class PqrVerdict { feasible, infeasible };

struct PqrResult {
    PqrVerdict verdict = PqrVerdict::infeasible;
    std::optional<PqrCertificate> certificate;
    std::uint64_t nodes = 0;                  // search nodes expanded
    std::optional<std::string> pruned_reason; // set when decided without search

    bool feasible() const noexcept { return verdict == PqrVerdict::feasible; }
};

inline void validate_pqr_instance(const PqrInstance& inst) {
    if (!(inst.p >= inst.r && inst.r >= inst.q && inst.q > 0))
        throw error(errc::config_error, "require p >= r >= q > 0");
    if (!(inst.q <= inst.budget && inst.budget <= inst.n))
        throw error(errc::config_error, "require q <= budget <= n");
    if (inst.n > 16)
        throw error(errc::cap_exceeded, "exact search supports pools up to 16 elements");
    if (binomial(inst.n, inst.p) > inst.cap)
        throw error(errc::cap_exceeded, "C(n,p) exceeds the configured cap");
}

/// Sound infeasibility certificate for the perfect case r = p: a q-subset
/// T perfectly covers only the p-subsets S with T <= S <= eta(T), of which
/// there are at most C(budget - q, p - q). If C(n,q) many such covers
/// cannot reach C(n,p), the instance is infeasible. Never flags a feasible
/// instance.
inline bool counting_bound(const PqrInstance& inst) {
    if (inst.r != inst.p)
        throw error(errc::r_not_p, "counting_bound applies only to r = p");
    std::uint64_t need = binomial(inst.n, inst.p);
    std::uint64_t covers = binomial(inst.n, inst.q);
    std::uint64_t per = binomial(inst.budget - inst.q, inst.p - inst.q);
    if (per != 0 && covers > std::numeric_limits<std::uint64_t>::max() / per)
        return false;  // capacity saturates, cannot exceed
    return need > covers * per;
}

/// Exact check of a certificate against every p-subset: sigma present and
/// a size-q subset of S, eta within budget, and the overlap requirement.
inline bool verify_certificate(const PqrInstance& inst, const PqrCertificate& cert) {
    auto find = [](const std::vector<std::pair<Mask, Mask>>& table,
                   Mask key) -> std::optional<Mask> {
        for (const auto& [k, v] : table)
            if (k == key) return v;
        return std::nullopt;
    };
    Mask full = inst.n >= 32 ? ~Mask{0} : (Mask{1} << inst.n) - 1;
    for (Mask s = 0; s <= full; ++s) {
        if (std::popcount(s) != static_cast<int>(inst.p)) continue;
        auto sig = find(cert.sigma, s);
        if (!sig) return false;
        if ((*sig & ~s) != 0 || std::popcount(*sig) != static_cast<int>(inst.q)) return false;
        auto eta = find(cert.eta, *sig);
        if (!eta) return false;
        if (std::popcount(*eta) > static_cast<int>(inst.budget)) return false;
        if (std::popcount(*eta & s) < static_cast<int>(inst.r)) return false;
        if (s == full) break;
    }
    return true;
}

namespace detail {

inline std::vector<Mask> masks_with_popcount(unsigned n, unsigned k) {
    std::vector<Mask> out;
    Mask limit = (n >= 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    for (Mask m = 0;; ++m) {
        if (std::popcount(m) == static_cast<int>(k)) out.push_back(m);
        if (m == limit) break;
    }
    return out;
}

inline std::vector<Mask> masks_with_popcount_upto(unsigned n, unsigned k) {
    std::vector<Mask> out;
    Mask limit = (n >= 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    for (Mask m = 0;; ++m) {
        if (std::popcount(m) <= static_cast<int>(k)) out.push_back(m);
        if (m == limit) break;
    }
    return out;
}

} // namespace detail

/// Complete backtracking search over eta assignments, one q-subset at a
/// time in colex order, with sigma induced greedily. Constraints are
/// checked as soon as every q-subset of a p-subset has been assigned; for
/// r = p a running capacity count prunes branches that cannot cover the
/// remaining p-subsets, and candidate reconstructions are restricted to
/// supersets of their q-subset (any eta value used by a perfect cover must
/// contain both the subset and the covered set) plus the empty set for
/// unused entries. The search is sequential and commits the first feasible
/// assignment in this fixed order, so the reported certificate is
/// deterministic.
inline PqrResult search_pqr(const PqrInstance& inst) {
    validate_pqr_instance(inst);
    PqrResult result;

    if (inst.n < inst.p) {  // no p-subsets: vacuously feasible
        result.verdict = PqrVerdict::feasible;
        result.certificate = PqrCertificate{};
        return result;
    }
    if (inst.r > std::min(inst.p, inst.budget)) {
        result.pruned_reason = "budget below the required overlap";
        return result;
    }
    if (inst.r == inst.p && counting_bound(inst)) {
        result.pruned_reason = "counting bound";
        return result;
    }

    const bool perfect = inst.r == inst.p;
    std::vector<Mask> qsubs = detail::masks_with_popcount(inst.n, inst.q);
    std::vector<Mask> psubs = detail::masks_with_popcount(inst.n, inst.p);
    const std::size_t levels = qsubs.size();

    // p-subsets containing each q-subset, and the level at which each
    // p-subset has seen all of its q-subsets
    std::vector<std::vector<std::size_t>> supersets(levels);
    std::vector<std::vector<std::size_t>> due(levels);
    for (std::size_t si = 0; si < psubs.size(); ++si) {
        std::size_t last = 0;
        for (std::size_t li = 0; li < levels; ++li)
            if ((qsubs[li] & ~psubs[si]) == 0) {
                supersets[li].push_back(si);
                last = li;
            }
        due[last].push_back(si);
    }

    // candidate reconstructions per level
    std::vector<Mask> shared_candidates;
    std::vector<std::vector<Mask>> per_level_candidates;
    if (perfect) {
        per_level_candidates.resize(levels);
        std::vector<Mask> small = detail::masks_with_popcount_upto(inst.n, inst.budget);
        for (std::size_t li = 0; li < levels; ++li) {
            per_level_candidates[li].push_back(0);  // unused entry
            for (Mask m : small)
                if ((qsubs[li] & ~m) == 0 && m != 0) per_level_candidates[li].push_back(m);
        }
    } else {
        shared_candidates = detail::masks_with_popcount_upto(inst.n, inst.budget);
    }

    const std::uint64_t per_level_capacity =
        perfect ? binomial(inst.budget - inst.q, inst.p - inst.q) : 0;

    std::vector<Mask> assignment(levels, 0);
    std::vector<char> covered(psubs.size(), 0);
    std::size_t covered_count = 0;

    std::function<bool(std::size_t)> dfs = [&](std::size_t level) -> bool {
        if (level == levels) return covered_count == psubs.size();
        const std::vector<Mask>& candidates =
            perfect ? per_level_candidates[level] : shared_candidates;
        for (Mask cand : candidates) {
            ++result.nodes;
            std::vector<std::size_t> newly;
            for (std::size_t si : supersets[level])
                if (!covered[si] &&
                    std::popcount(cand & psubs[si]) >= static_cast<int>(inst.r)) {
                    covered[si] = 1;
                    ++covered_count;
                    newly.push_back(si);
                }
            bool ok = true;
            for (std::size_t si : due[level])
                if (!covered[si]) {
                    ok = false;
                    break;
                }
            if (ok && perfect) {
                std::uint64_t remaining = psubs.size() - covered_count;
                std::uint64_t capacity =
                    per_level_capacity * static_cast<std::uint64_t>(levels - level - 1);
                if (remaining > capacity) ok = false;
            }
            if (ok) {
                assignment[level] = cand;
                if (dfs(level + 1)) return true;
            }
            for (std::size_t si : newly) {
                covered[si] = 0;
                --covered_count;
            }
        }
        return false;
    };

    if (!dfs(0)) return result;

    // assemble the certificate: sigma is the colex-least covering q-subset
    PqrCertificate cert;
    std::vector<char> used(levels, 0);
    for (std::size_t si = 0; si < psubs.size(); ++si) {
        for (std::size_t li = 0; li < levels; ++li) {
            if ((qsubs[li] & ~psubs[si]) != 0) continue;
            if (std::popcount(assignment[li] & psubs[si]) >= static_cast<int>(inst.r)) {
                cert.sigma.emplace_back(psubs[si], qsubs[li]);
                used[li] = 1;
                break;
            }
        }
    }
    for (std::size_t li = 0; li < levels; ++li)
        if (used[li]) cert.eta.emplace_back(qsubs[li], assignment[li]);
    result.verdict = PqrVerdict::feasible;
    result.certificate = std::move(cert);
    return result;
}

/// Pool elements of a mask, ascending.
inline std::vector<unsigned> mask_elements(Mask m) {
    std::vector<unsigned> out;
    for (unsigned i = 0; i < 32; ++i)
        if (m & (Mask{1} << i)) out.push_back(i);
    return out;
}

inline Mask mask_from_elements(const std::vector<unsigned>& elems) {
    Mask m = 0;
    for (unsigned e : elems) {
        if (e >= 32) throw error(errc::config_error, "pool element out of range");
        m |= Mask{1} << e;
    }
    return m;
}

} // namespace mcs
