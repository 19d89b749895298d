#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mcs/combinatorics.hpp"
#include "mcs/error.hpp"
#include "mcs/point.hpp"
#include "mcs/point_set.hpp"
#include "mcs/rng.hpp"
#include "mcs/scaffold.hpp"
#include "mcs/schemes.hpp"

namespace mcs {

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

/// A finite-support probability mass function over Points with a seeded,
/// reproducible sampler. Weights must be strictly positive and sum to 1
/// within 1e-12.
class Distribution {
public:
    Distribution(std::vector<Point> support, std::vector<double> weights)
        : support_(std::move(support)), weights_(std::move(weights)) {
        if (support_.empty())
            throw error(errc::config_error, "distribution support must be nonempty");
        if (support_.size() != weights_.size())
            throw error(errc::config_error, "support and weights must have equal length");
        for (const Point& p : support_)
            if (p.arity() != support_.front().arity())
                throw error(errc::arity_mismatch, "support points must share one arity");
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w > 0.0))
                throw error(errc::config_error, "weights must be strictly positive");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw error(errc::config_error, "weights must sum to 1 within 1e-12");
        cumulative_.reserve(weights_.size());
        double acc = 0.0;
        for (double w : weights_) {
            acc += w;
            cumulative_.push_back(acc);
        }
        cumulative_.back() = 1.0;
    }

    static Distribution uniform(std::vector<Point> support) {
        std::vector<double> w(support.size(), 1.0 / static_cast<double>(support.size()));
        return Distribution(std::move(support), std::move(w));
    }

    static Distribution point_mass(Point p) {
        return Distribution({std::move(p)}, {1.0});
    }

    const std::vector<Point>& support() const noexcept { return support_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// E_P(h), computed exactly by summation over the support.
    double expectation(const PointSet& h) const {
        double e = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (h.contains(support_[i])) e += weights_[i];
        return e;
    }

    const Point& sample(std::mt19937_64& rng) const {
        double u = uniform01(rng);
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
        if (i >= support_.size()) i = support_.size() - 1;
        return support_[i];
    }

    Sample sample_n(std::mt19937_64& rng, std::size_t m) const {
        std::vector<Point> pts;
        pts.reserve(m);
        for (std::size_t i = 0; i < m; ++i) pts.push_back(sample(rng));
        return Sample(std::move(pts));
    }

private:
    std::vector<Point> support_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

// ---------------------------------------------------------------------------
// Concept classes
// ---------------------------------------------------------------------------

/// Either an explicit finite list of finite sets over a declared pool, or
/// the class of all finite subsets of a scaffold domain.
class ConceptClass {
public:
    enum class Kind { extensional, fin_subsets };

    static ConceptClass extensional(std::vector<Point> pool,
                                    std::vector<std::vector<Point>> concepts,
                                    std::optional<bool> union_bounded_hint = std::nullopt) {
        ConceptClass c;
        c.kind_ = Kind::extensional;
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        for (auto& h : concepts) {
            std::sort(h.begin(), h.end());
            h.erase(std::unique(h.begin(), h.end()), h.end());
            for (const Point& p : h)
                if (!std::binary_search(pool.begin(), pool.end(), p))
                    throw error(errc::config_error, "concept contains a point outside the pool");
        }
        c.pool_ = std::move(pool);
        c.concepts_ = std::move(concepts);
        c.union_bounded_hint_ = union_bounded_hint;
        return c;
    }

    static ConceptClass fin_subsets(Scaffold s) {
        ConceptClass c;
        c.kind_ = Kind::fin_subsets;
        c.scaffold_ = s;
        return c;
    }

    Kind kind() const noexcept { return kind_; }
    const Scaffold& domain() const { return *scaffold_; }
    const std::vector<Point>& pool() const { return pool_; }
    const std::vector<std::vector<Point>>& concepts() const { return concepts_; }
    std::optional<bool> union_bounded_hint() const { return union_bounded_hint_; }

    /// Membership of an explicit finite set in the class.
    bool member(const PointSet& h) const {
        if (kind_ == Kind::fin_subsets) {
            // any finite set of scaffold points qualifies
            return h.empty() || h.arity() == scaffold_->arity();
        }
        std::vector<Point> pts;
        bool bounded = h.for_each([&](const Point& p) {
            if (pts.size() > pool_.size()) return false;
            pts.push_back(p);
            return true;
        });
        if (!bounded) return false;
        std::sort(pts.begin(), pts.end());
        for (const auto& concept_pts : concepts_)
            if (concept_pts == pts) return true;
        return false;
    }

private:
    Kind kind_ = Kind::extensional;
    std::optional<Scaffold> scaffold_;
    std::vector<Point> pool_;
    std::vector<std::vector<Point>> concepts_;
    std::optional<bool> union_bounded_hint_;
};

/// Opt_P: the supremum of E_P over the class. Brute-force maximum for
/// extensional classes; 1.0 for fin_subsets, where some finite set covers
/// the whole (finite) support.
inline double opt(const Distribution& P, const ConceptClass& F) {
    if (F.kind() == ConceptClass::Kind::fin_subsets) return 1.0;
    if (F.concepts().empty()) throw error(errc::empty_class, "class has no concepts");
    double best = 0.0;
    for (const auto& h : F.concepts()) {
        double e = 0.0;
        for (std::size_t i = 0; i < P.support().size(); ++i)
            if (std::binary_search(h.begin(), h.end(), P.support()[i])) e += P.weights()[i];
        best = std::max(best, e);
    }
    return best;
}

/// True iff every pairwise union of members is contained in some member.
inline bool is_union_bounded(const ConceptClass& F) {
    if (F.kind() == ConceptClass::Kind::fin_subsets) return true;  // closed under unions
    const auto& hs = F.concepts();
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i; j < hs.size(); ++j) {
            std::vector<Point> u;
            std::set_union(hs[i].begin(), hs[i].end(), hs[j].begin(), hs[j].end(),
                           std::back_inserter(u));
            bool dominated = false;
            for (const auto& h3 : hs)
                if (std::includes(h3.begin(), h3.end(), u.begin(), u.end())) {
                    dominated = true;
                    break;
                }
            if (!dominated) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Sample size for the subsample-enumeration learner
// ---------------------------------------------------------------------------

/// Deviation bound for enumerating all size-<=k subsamples of an m-sample,
/// with the delta/2 split folded in: sqrt((k ln(2m) + ln(2/delta)) / (2(m-k))).
inline double lw_alpha(std::size_t k, std::size_t m, double delta) {
    return std::sqrt((static_cast<double>(k) * std::log(2.0 * static_cast<double>(m)) +
                      std::log(2.0 / delta)) /
                     (2.0 * static_cast<double>(m - k)));
}

/// Least m > k with lw_alpha(k, m, delta) <= eps/2, found by monotone
/// numeric search. Always terminates: alpha -> 0 as m -> infinity.
inline std::size_t sample_size(std::size_t k, double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0))
        throw error(errc::config_error, "require 0 < eps, delta < 1");
    auto good = [&](std::size_t m) { return lw_alpha(k, m, delta) <= eps / 2.0; };
    std::size_t lo = k + 1, hi = k + 1;
    while (!good(hi)) hi = hi * 2 + 1;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (good(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

/// Positions of a subsample: a strictly increasing index sequence into a
/// Sample of bounded length.
struct SubsampleIndex {
    std::vector<std::size_t> indices;

    Sample select(const Sample& s) const {
        std::vector<Point> pts;
        pts.reserve(indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] >= s.size())
                throw error(errc::config_error, "subsample index out of range");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw error(errc::config_error, "subsample indices must strictly increase");
            pts.push_back(s[indices[i]]);
        }
        return Sample(std::move(pts));
    }

    Sample complement(const Sample& s) const {
        std::vector<Point> pts;
        std::size_t next = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (next < indices.size() && indices[next] == i) {
                ++next;
                continue;
            }
            pts.push_back(s[i]);
        }
        return Sample(std::move(pts));
    }
};

/// A proper learning rule: maps samples to class members.
struct Learner {
    std::string name;
    std::size_t sample_size = 0;            // declared input size (d0 for extraction)
    std::optional<std::size_t> scheme_size;  // d, when backed by a compression scheme
    std::function<PointSet(const Sample&)> run;
};

namespace detail {

inline void require_member(const ConceptClass& F, const PointSet& h) {
    if (!F.member(h))
        throw error(errc::not_in_class, "reconstruction is not a member of the class");
}

/// Side values a reconstruction may carry: just 0 for budget-0 schemes; the
/// full budget range for small fixed budgets; 0..m for variable budgets
/// (covers the uniformized encoding, whose side value never exceeds the
/// sample size).
inline std::vector<SideInfo> side_candidates(const MonotoneScheme& scheme, std::size_t m) {
    std::vector<SideInfo> out;
    if (scheme.side_bits().has_value()) {
        unsigned b = *scheme.side_bits();
        if (b == 0) {
            out.push_back(SideInfo::none());
            return out;
        }
        if (b > 20) throw error(errc::config_error, "side budget too large to enumerate");
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << b); ++v)
            out.emplace_back(v, b);
        return out;
    }
    for (std::uint64_t v = 0; v <= m; ++v)
        out.emplace_back(v, v == 0 ? 0 : std::bit_width(v));
    return out;
}

} // namespace detail

/// Subsample-enumeration learner: evaluates the reconstruction of every
/// index tuple A with |A| <= k on the complementary subsample and returns
/// the empirical maximizer. Ties break toward the lexicographically least
/// A (the empty tuple first); the empirical mean over an empty complement
/// counts as 1.
inline PointSet lw_learn(const MonotoneScheme& scheme, const ConceptClass& F, const Sample& S) {
    if (S.empty()) throw error(errc::config_error, "lw_learn requires a nonempty sample");
    std::size_t k = scheme.size_bound();
    std::vector<SideInfo> sides = detail::side_candidates(scheme, S.size());

    PointSet best;
    double best_mean = -1.0;
    for_each_index_tuple_upto(S.size(), k, [&](const std::vector<std::size_t>& a) {
        SubsampleIndex A{a};
        Sample sa = A.select(S);
        Sample rest = A.complement(S);
        for (const SideInfo& side : sides) {
            PointSet candidate = scheme.reconstruct(sa, side);
            detail::require_member(F, candidate);
            double mean = 1.0;
            if (!rest.empty()) {
                std::size_t hit = 0;
                for (const Point& p : rest)
                    if (candidate.contains(p)) ++hit;
                mean = static_cast<double>(hit) / static_cast<double>(rest.size());
            }
            if (mean > best_mean) {
                best_mean = mean;
                best = candidate;
            }
        }
        return true;
    });
    return best;
}

/// Leave-one-out learner: a class member containing the union of the
/// reconstructions of every subsample of size <= d. For fin_subsets the
/// union itself is returned; for extensional classes, the least member (in
/// declaration order) containing the union.
inline PointSet loo_learn(const MonotoneScheme& scheme, const ConceptClass& F, const Sample& S) {
    std::size_t d = scheme.size_bound();
    std::vector<PointSet> parts;
    for_each_index_tuple_upto(S.size(), d, [&](const std::vector<std::size_t>& a) {
        SubsampleIndex A{a};
        parts.push_back(scheme.reconstruct(A.select(S), SideInfo::none()));
        return true;
    });
    PointSet u = PointSet::union_of(std::move(parts));
    if (F.kind() == ConceptClass::Kind::fin_subsets) {
        detail::require_member(F, u);
        return u;
    }
    for (const auto& h : F.concepts()) {
        bool covers = u.for_each([&](const Point& p) {
            return std::binary_search(h.begin(), h.end(), p);
        });
        if (covers) return PointSet::of(h);
    }
    throw error(errc::no_dominating_concept,
                "no class member contains the union of reconstructions");
}

inline Learner make_loo_learner(MonotoneScheme scheme, ConceptClass F) {
    auto shared = std::make_shared<std::pair<MonotoneScheme, ConceptClass>>(std::move(scheme),
                                                                            std::move(F));
    return Learner{"loo:" + shared->first.name(), 0, shared->first.size_bound(),
                   [shared](const Sample& s) { return loo_learn(shared->first, shared->second, s); }};
}

inline Learner make_lw_learner(MonotoneScheme scheme, ConceptClass F) {
    auto shared = std::make_shared<std::pair<MonotoneScheme, ConceptClass>>(std::move(scheme),
                                                                            std::move(F));
    return Learner{"lw:" + shared->first.name(), 0, shared->first.size_bound(),
                   [shared](const Sample& s) { return lw_learn(shared->first, shared->second, s); }};
}

/// The depth-0 maximum learner G(S) = {0..max S}; a (1/3,1/3)-EMX learner
/// for fin_subsets once d0 satisfies (2/3)^d0 < 1/3.
inline Learner make_max_learner(std::size_t d0) {
    return Learner{"max", d0, std::nullopt, [](const Sample& s) -> PointSet {
                       if (s.empty()) return PointSet();
                       Coord top = 0;
                       for (const Point& p : s) top = std::max(top, p[0]);
                       return PointSet::nat_prefix(top);
                   }};
}

// ---------------------------------------------------------------------------
// Regret experiments
// ---------------------------------------------------------------------------

struct RegretReport {
    std::uint64_t trials = 0;
    double mean_regret = 0.0;
    double stderr_of_mean = 0.0;
    std::optional<double> bound;  // d/(m+1) when the learner is compression-backed
    std::uint64_t seed = 0;
    std::vector<double> per_trial;
};

/// Draws `trials` i.i.d. size-m samples from P, runs the learner, and
/// measures regret = opt(P, F) - E_P(output) exactly on the support. Each
/// trial derives an independent generator from (seed, trial), so results
/// do not depend on execution order.
inline RegretReport regret_experiment(const Learner& learner, const Distribution& P,
                                      const ConceptClass& F, std::size_t m,
                                      std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw error(errc::config_error, "trials must be >= 1");
    double optimum = opt(P, F);
    RegretReport report;
    report.trials = trials;
    report.seed = seed;
    report.per_trial.reserve(trials);
    double sum = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        Sample s = P.sample_n(rng, m);
        PointSet h = learner.run(s);
        double regret = optimum - P.expectation(h);
        // weights only sum to 1 within 1e-12, so full coverage can land a
        // hair below zero
        if (regret < 0.0 && regret > -1e-9) regret = 0.0;
        report.per_trial.push_back(regret);
        sum += regret;
    }
    report.mean_regret = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double r : report.per_trial) {
        double d = r - report.mean_regret;
        ss += d * d;
    }
    double variance = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
    report.stderr_of_mean = std::sqrt(variance / static_cast<double>(trials));
    if (learner.scheme_size)
        report.bound = static_cast<double>(*learner.scheme_size) / static_cast<double>(m + 1);
    return report;
}

// ---------------------------------------------------------------------------
// Learner -> compression extraction
// ---------------------------------------------------------------------------

namespace detail {

/// One application of the extension operator E: a class member containing
/// Y and every G(T) for canonical tuples T from Y with |T| <= d0. Adding Y
/// itself mirrors the without-loss-of-generality step that makes learners
/// inclusive, so E is inflationary and monotone for union-closed classes.
inline std::vector<Point> learner_extension_sorted(const Learner& g, const ConceptClass& F,
                                                   const std::vector<Point>& y_sorted,
                                                   const std::unordered_set<Point, PointHash>* delta,
                                                   bool include_empty_tuple) {
    SetBuilder acc;
    for (const Point& p : y_sorted) acc.add(p);
    std::size_t d0 = g.sample_size;
    if (include_empty_tuple) acc.absorb(g.run(Sample{}));
    for (std::size_t t = 1; t <= std::min(d0, y_sorted.size()); ++t) {
        for_each_combination(y_sorted.size(), t, [&](const std::vector<std::size_t>& idx) {
            if (delta) {
                bool touches = false;
                for (std::size_t i : idx)
                    if (delta->count(y_sorted[i])) {
                        touches = true;
                        break;
                    }
                if (!touches) return true;
            }
            std::vector<Point> pts;
            pts.reserve(t);
            for (std::size_t i : idx) pts.push_back(y_sorted[i]);
            acc.absorb(g.run(Sample(std::move(pts))));
            return true;
        });
    }
    std::vector<Point> u = acc.sorted_points();
    if (F.kind() == ConceptClass::Kind::fin_subsets) return u;
    for (const auto& h : F.concepts())
        if (std::includes(h.begin(), h.end(), u.begin(), u.end())) return h;
    throw error(errc::no_dominating_concept,
                "no class member contains the learner extension");
}

} // namespace detail

/// E(Y) as used by the extraction procedure; exposed so its monotonicity
/// can be checked directly.
inline PointSet learner_extension(const Learner& g, const ConceptClass& F,
                                  const std::vector<Point>& y) {
    std::vector<Point> sorted = y;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return PointSet::of(detail::learner_extension_sorted(g, F, sorted, nullptr, true));
}

/// Turns a proper (1/3,1/3)-style learner with sample size d0 over a
/// union-bounded class into a monotone compression scheme of size
/// ceil(3*d0/2) for samples of size <= m. The compressor greedily removes
/// any element recoverable from the rest (scanning in pool order, least
/// element first); the reconstructor applies E iteratively m times, with a
/// fixed-point early exit that leaves the result unchanged. A removal
/// process stalling above the bound certifies that the learner is not a
/// (1/3,1/3)-learner and raises SizeBoundExceeded.
inline MonotoneScheme extract_compression(const Learner& g, const ConceptClass& F,
                                          std::size_t m) {
    if (!is_union_bounded(F))
        throw error(errc::not_union_bounded, "extraction requires a union-bounded class");
    std::size_t d0 = g.sample_size;
    std::size_t bound = (3 * d0 + 1) / 2;  // ceil(3*d0/2)
    auto shared = std::make_shared<std::pair<Learner, ConceptClass>>(g, F);

    auto compressor = [shared, bound](const Sample& S) -> Compressed {
        const Learner& learner = shared->first;
        const ConceptClass& cls = shared->second;
        std::vector<std::size_t> alive(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) alive[i] = i;
        bool removed = true;
        while (removed) {
            removed = false;
            // scan candidates in pool order: least point first, then position
            std::vector<std::size_t> order = alive;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (S[a] != S[b]) return S[a] < S[b];
                return a < b;
            });
            for (std::size_t cand : order) {
                std::vector<Point> rest;
                for (std::size_t i : alive)
                    if (i != cand) rest.push_back(S[i]);
                std::sort(rest.begin(), rest.end());
                rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
                std::vector<Point> ext =
                    detail::learner_extension_sorted(learner, cls, rest, nullptr, true);
                if (std::binary_search(ext.begin(), ext.end(), S[cand])) {
                    alive.erase(std::find(alive.begin(), alive.end(), cand));
                    removed = true;
                    break;
                }
            }
        }
        if (alive.size() > bound)
            throw error(errc::size_bound_exceeded,
                        "removal process stalled at size " + std::to_string(alive.size()) +
                            ", above ceil(3*d0/2) = " + std::to_string(bound) +
                            "; the learner is not a (1/3,1/3)-learner");
        std::vector<Point> kept;
        kept.reserve(alive.size());
        for (std::size_t i : alive) kept.push_back(S[i]);
        return Compressed{Sample(std::move(kept)), SideInfo::none()};
    };

    struct ReconstructCache {
        std::mutex mu;
        std::map<std::vector<Point>, PointSet> entries;
    };
    auto cache = std::make_shared<ReconstructCache>();

    auto reconstructor = [shared, m, cache](const Sample& c, const SideInfo&) -> PointSet {
        const Learner& learner = shared->first;
        const ConceptClass& cls = shared->second;
        std::vector<Point> y = sorted_distinct(c);
        std::vector<Point> key = y;
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->entries.find(key);
            if (it != cache->entries.end()) return it->second;
        }
        std::unordered_set<Point, PointHash> delta;
        for (std::size_t round = 0; round < m; ++round) {
            if (round > 0 && delta.empty()) break;  // E(y) == y from here on
            std::vector<Point> next =
                detail::learner_extension_sorted(learner, cls, y, round == 0 ? nullptr : &delta,
                                                 round == 0);
            // next is a superset of y; further rounds only need tuples that
            // touch fresh points
            std::unordered_set<Point, PointHash> fresh;
            for (const Point& p : next)
                if (!std::binary_search(y.begin(), y.end(), p)) fresh.insert(p);
            y = std::move(next);
            delta = std::move(fresh);
        }
        PointSet result = PointSet::of(std::move(y));
        std::lock_guard<std::mutex> lock(cache->mu);
        if (cache->entries.size() < 100'000) cache->entries.emplace(std::move(key), result);
        return result;
    };

    return MonotoneScheme("extracted:" + g.name, bound, std::move(compressor),
                          std::move(reconstructor), m);
}

} // namespace mcs
