#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcs/combinatorics.hpp"
#include "mcs/emx.hpp"
#include "mcs/error.hpp"
#include "mcs/point.hpp"
#include "mcs/point_set.hpp"
#include "mcs/schemes.hpp"

namespace mcs {

// ---------------------------------------------------------------------------
// Growth functions and uniformization
// ---------------------------------------------------------------------------

/// A monotone map N -> N tending to infinity, restricted to named
/// primitives so experiment configs stay reproducible. Evaluation
/// saturates at uint64 max.
class GrowthFunction {
public:
    enum class Kind { identity, power, tower };

    static GrowthFunction identity() { return GrowthFunction(Kind::identity, 0); }
    static GrowthFunction power_of_two() { return GrowthFunction(Kind::power, 2); }
    static GrowthFunction power(std::uint64_t base) {
        if (base < 2) throw error(errc::config_error, "power base must be >= 2");
        return GrowthFunction(Kind::power, base);
    }
    static GrowthFunction tower(std::uint64_t base = 2) {
        if (base < 2) throw error(errc::config_error, "tower base must be >= 2");
        return GrowthFunction(Kind::tower, base);
    }

    Kind kind() const noexcept { return kind_; }
    std::uint64_t base() const noexcept { return base_; }

    std::uint64_t eval(std::uint64_t n) const {
        constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
        switch (kind_) {
            case Kind::identity:
                return n;
            case Kind::power: {
                std::uint64_t r = 1;
                for (std::uint64_t i = 0; i < n; ++i) {
                    if (r > kMax / base_) return kMax;
                    r *= base_;
                }
                return r;
            }
            case Kind::tower: {
                std::uint64_t r = 1;
                for (std::uint64_t i = 0; i < n; ++i) {
                    if (r >= 64) return kMax;  // 2^64 already saturates
                    std::uint64_t e = r;
                    r = 1;
                    for (std::uint64_t j = 0; j < e; ++j) {
                        if (r > kMax / base_) return kMax;
                        r *= base_;
                    }
                }
                return r;
            }
        }
        return n;
    }

    /// Least n with f(n) >= m.
    std::uint64_t inverse_least(std::uint64_t m) const {
        for (std::uint64_t n = 0;; ++n)
            if (eval(n) >= m) return n;
    }

    std::string name() const {
        switch (kind_) {
            case Kind::identity:
                return "identity";
            case Kind::power:
                return base_ == 2 ? "power-of-two" : "power:" + std::to_string(base_);
            case Kind::tower:
                return "tower";
        }
        return "identity";
    }

private:
    GrowthFunction(Kind k, std::uint64_t b) : kind_(k), base_(b) {}

    Kind kind_;
    std::uint64_t base_;
};

/// A non-uniform scheme: one member per handled sample size, all of a
/// common size bound, all side-free.
class SchemeFamily {
public:
    explicit SchemeFamily(std::map<std::size_t, MonotoneScheme> per_m)
        : per_m_(std::move(per_m)) {
        if (per_m_.empty()) throw error(errc::config_error, "scheme family is empty");
        size_bound_ = per_m_.begin()->second.size_bound();
        for (const auto& [m, scheme] : per_m_) {
            if (scheme.size_bound() != size_bound_)
                throw error(errc::config_error, "family members must share one size bound");
            if (!scheme.side_bits() || *scheme.side_bits() != 0)
                throw error(errc::config_error, "family members must be side-free");
        }
    }

    std::size_t size_bound() const noexcept { return size_bound_; }
    const std::map<std::size_t, MonotoneScheme>& members() const noexcept { return per_m_; }

    const MonotoneScheme& at(std::size_t m) const {
        auto it = per_m_.find(m);
        if (it == per_m_.end())
            throw error(errc::family_gap,
                        "family has no member for sample size " + std::to_string(m));
        return it->second;
    }

private:
    std::map<std::size_t, MonotoneScheme> per_m_;
    std::size_t size_bound_ = 0;
};

/// Turns a non-uniform family into a single uniform scheme by shipping the
/// family selector as side information: a sample of size m is compressed
/// with the member for f(m'), where m' is the least index with f(m') >= m,
/// and m' rides along in bit_width(m') bits. Reconstruction dispatches
/// back to that member.
inline MonotoneScheme uniformize(SchemeFamily fam, GrowthFunction f) {
    auto shared = std::make_shared<SchemeFamily>(std::move(fam));
    std::size_t d = shared->size_bound();
    auto compressor = [shared, f](const Sample& s) -> Compressed {
        std::uint64_t mprime = f.inverse_least(s.size());
        const MonotoneScheme& member = shared->at(static_cast<std::size_t>(f.eval(mprime)));
        Compressed c = member.compress(s);
        return Compressed{c.sample,
                          SideInfo(mprime, static_cast<unsigned>(std::bit_width(mprime)))};
    };
    auto reconstructor = [shared, f](const Sample& c, const SideInfo& side) -> PointSet {
        const MonotoneScheme& member =
            shared->at(static_cast<std::size_t>(f.eval(side.value)));
        return member.reconstruct(c, SideInfo::none());
    };
    return MonotoneScheme("uniformized[" + f.name() + "]", d, std::move(compressor),
                          std::move(reconstructor), std::nullopt, std::nullopt);
}

// ---------------------------------------------------------------------------
// DecreaseSize
// ---------------------------------------------------------------------------

/// The size-reduction step: given a scheme handling (k+1)-samples on X and
/// a subpool X' whose size-<=k reconstructions miss some x* in X, produces
/// a k -> (k-1) scheme on X'. Compression adjoins x*, compresses with the
/// input scheme, and drops x* again; reconstruction re-adjoins x* and
/// intersects with X'. x* is the least element of X outside the union of
/// reconstructions, NoFreshElement if the union swallows all of X.
inline MonotoneScheme decrease_size(const MonotoneScheme& scheme, std::vector<Point> X,
                                    std::vector<Point> Xprime, std::size_t k,
                                    std::uint64_t enum_cap = 1'000'000) {
    if (k < 1) throw error(errc::config_error, "decrease_size requires k >= 1");
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    std::sort(Xprime.begin(), Xprime.end());
    Xprime.erase(std::unique(Xprime.begin(), Xprime.end()), Xprime.end());
    for (const Point& p : Xprime)
        if (!std::binary_search(X.begin(), X.end(), p))
            throw error(errc::config_error, "X' must be a subset of X");

    std::uint64_t total = 0;
    for (std::size_t t = 0; t <= k; ++t) total += binomial(Xprime.size(), t);
    if (total > enum_cap)
        throw error(errc::cap_exceeded, "reconstruction union would enumerate " +
                                            std::to_string(total) + " subsets");

    // Y = union of reconstructions of every size-<=k subset of X'
    SetBuilder y;
    for (std::size_t t = 0; t <= k; ++t) {
        for_each_combination(Xprime.size(), t, [&](const std::vector<std::size_t>& idx) {
            std::vector<Point> pts;
            pts.reserve(t);
            for (std::size_t i : idx) pts.push_back(Xprime[i]);
            y.absorb(scheme.reconstruct(Sample(std::move(pts)), SideInfo::none()));
            return true;
        });
    }

    std::optional<Point> fresh;
    for (const Point& x : X)
        if (!y.contains(x)) {
            fresh = x;
            break;
        }
    if (!fresh)
        throw error(errc::no_fresh_element,
                    "every element of X lies in the union of reconstructions");

    auto inner = std::make_shared<MonotoneScheme>(scheme);
    Point xstar = *fresh;
    auto pool_prime = std::make_shared<std::vector<Point>>(std::move(Xprime));

    auto compressor = [inner, xstar](const Sample& s) -> Compressed {
        std::vector<Point> combined = sorted_distinct(s);
        if (!std::binary_search(combined.begin(), combined.end(), xstar)) {
            combined.push_back(xstar);
            std::sort(combined.begin(), combined.end());
        }
        Compressed c = inner->compress(Sample(combined));
        std::vector<Point> kept_set(c.sample.begin(), c.sample.end());
        std::sort(kept_set.begin(), kept_set.end());
        std::vector<Point> out;
        for (const Point& p : s) {
            auto it = std::lower_bound(kept_set.begin(), kept_set.end(), p);
            if (it != kept_set.end() && *it == p) {
                out.push_back(p);
                kept_set.erase(it);  // keep each retained element once
            }
        }
        return Compressed{Sample(std::move(out)), SideInfo::none()};
    };
    auto reconstructor = [inner, xstar, pool_prime](const Sample& c, const SideInfo&) {
        std::vector<Point> combined = sorted_distinct(c);
        if (!std::binary_search(combined.begin(), combined.end(), xstar)) {
            combined.push_back(xstar);
            std::sort(combined.begin(), combined.end());
        }
        PointSet r = inner->reconstruct(Sample(combined), SideInfo::none());
        std::vector<Point> restricted;
        for (const Point& p : *pool_prime)
            if (r.contains(p)) restricted.push_back(p);
        return PointSet::of(std::move(restricted));
    };
    return MonotoneScheme("decrease[" + scheme.name() + "]", k - 1, std::move(compressor),
                          std::move(reconstructor), k);
}

// ---------------------------------------------------------------------------
// Imperfect-to-perfect
// ---------------------------------------------------------------------------

/// A compressor/reconstructor pair on exact-size subsets of a finite pool:
/// every p-subset S maps to a q-subset of itself whose reconstruction
/// meets S in at least r elements. Subsets travel in pool order; the
/// pool's declaration order also fixes all tie-breaks.
struct PqScheme {
    std::vector<Point> pool;
    std::size_t p = 0, q = 0, r = 0;
    std::function<std::vector<Point>(const std::vector<Point>&)> sigma;
    std::function<std::vector<Point>(const std::vector<Point>&)> eta;
};

namespace detail {

inline std::size_t pool_index(const std::vector<Point>& pool, const Point& p) {
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i] == p) return i;
    throw error(errc::config_error, "point is not in the pool");
}

inline void sort_by_pool(const std::vector<Point>& pool, std::vector<Point>& pts) {
    std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
        return pool_index(pool, a) < pool_index(pool, b);
    });
}

} // namespace detail

/// Upgrades an imperfect (p -> q -> q+1) pair into a perfect
/// (p -> (p-1) -> p) pair: drop the least recovered-but-not-kept element
/// alpha_S, and reconstruct a (p-1)-set U as U together with the
/// reconstructions of all of U's q-subsets. Rejects inputs whose declared
/// r is not q+1; raises ContractViolated when some S admits no alpha.
inline PqScheme imperfect_to_perfect(const PqScheme& in) {
    if (!(in.p >= in.r && in.r >= in.q && in.q > 0))
        throw error(errc::config_error, "require p >= r >= q > 0");
    if (in.r != in.q + 1)
        throw error(errc::contract_violated,
                    "imperfect_to_perfect requires an input contract with r = q+1");
    auto shared = std::make_shared<PqScheme>(in);

    PqScheme out;
    out.pool = in.pool;
    out.p = in.p;
    out.q = in.p - 1;
    out.r = in.p;
    out.sigma = [shared](const std::vector<Point>& s) {
        const PqScheme& base = *shared;
        if (s.size() != base.p)
            throw error(errc::contract_violated, "sigma expects an exact p-subset");
        std::vector<Point> kept = base.sigma(s);
        for (const Point& t : kept)
            if (std::find(s.begin(), s.end(), t) == s.end())
                throw error(errc::contract_violated, "input sigma left its subset");
        std::vector<Point> recon = base.eta(kept);
        std::optional<Point> alpha;
        for (const Point& cand : s) {  // pool order: s arrives pool-ordered
            if (std::find(kept.begin(), kept.end(), cand) != kept.end()) continue;
            if (std::find(recon.begin(), recon.end(), cand) != recon.end()) {
                alpha = cand;
                break;
            }
        }
        if (!alpha)
            throw error(errc::contract_violated,
                        "no removable element: the input pair is not a (p->q->q+1) compression");
        std::vector<Point> rest;
        for (const Point& x : s)
            if (x != *alpha) rest.push_back(x);
        return rest;
    };
    out.eta = [shared](const std::vector<Point>& u) {
        const PqScheme& base = *shared;
        std::vector<Point> result = u;
        for_each_combination(u.size(), base.q, [&](const std::vector<std::size_t>& idx) {
            std::vector<Point> t;
            t.reserve(base.q);
            for (std::size_t i : idx) t.push_back(u[i]);
            for (const Point& x : base.eta(t)) result.push_back(x);
            return true;
        });
        detail::sort_by_pool(base.pool, result);
        result.erase(std::unique(result.begin(), result.end()), result.end());
        return result;
    };
    return out;
}

/// Adapts a PqScheme to the MonotoneScheme interface so exhaustive_validate
/// can quantify it over exact-size-p samples.
inline MonotoneScheme as_monotone_scheme(const PqScheme& s, std::string name = "pq") {
    auto shared = std::make_shared<PqScheme>(s);
    auto compressor = [shared](const Sample& in) -> Compressed {
        std::vector<Point> set = sorted_distinct(in);
        if (set.size() != shared->p)
            throw error(errc::contract_violated, "scheme is defined on exact p-subsets");
        detail::sort_by_pool(shared->pool, set);
        std::vector<Point> kept = shared->sigma(set);
        std::vector<Point> out;
        for (const Point& p : in) {
            auto it = std::find(kept.begin(), kept.end(), p);
            if (it != kept.end()) {
                out.push_back(p);
                kept.erase(it);
            }
        }
        return Compressed{Sample(std::move(out)), SideInfo::none()};
    };
    auto reconstructor = [shared](const Sample& c, const SideInfo&) {
        std::vector<Point> set = sorted_distinct(c);
        detail::sort_by_pool(shared->pool, set);
        return PointSet::of(shared->eta(set));
    };
    return MonotoneScheme(std::move(name), s.q, std::move(compressor), std::move(reconstructor),
                          s.p);
}

// ---------------------------------------------------------------------------
// Labeled lift
// ---------------------------------------------------------------------------

inline Point lift_point(const Point& x, bool label) {
    std::vector<Coord> coords = x.coords();
    coords.push_back(label ? 1 : 0);
    return Point(std::move(coords));
}

/// The graph of h as a subset of X x {0,1}: {(x, h(x)) : x in X}.
inline std::vector<Point> concept_graph(const std::vector<Point>& pool,
                                        const std::vector<Point>& h) {
    std::vector<Point> graph;
    graph.reserve(pool.size());
    for (const Point& x : pool)
        graph.push_back(lift_point(x, std::binary_search(h.begin(), h.end(), x)));
    std::sort(graph.begin(), graph.end());
    return graph;
}

/// Lifts an extensional class H over X to the class of concept graphs over
/// X x {0,1}. Distinct concepts lift to distinct sets, so cardinality is
/// preserved, and the lift preserves VC dimension. A monotone scheme for
/// the lifted class induces a proper compression for H on labeled samples
/// (see lift_labeled_sample / proper_decode).
inline ConceptClass labeled_lift(const ConceptClass& H) {
    if (H.kind() != ConceptClass::Kind::extensional)
        throw error(errc::config_error, "labeled_lift requires an extensional class");
    std::vector<Point> lifted_pool;
    for (const Point& x : H.pool()) {
        lifted_pool.push_back(lift_point(x, false));
        lifted_pool.push_back(lift_point(x, true));
    }
    std::vector<std::vector<Point>> lifted;
    lifted.reserve(H.concepts().size());
    for (const auto& h : H.concepts()) lifted.push_back(concept_graph(H.pool(), h));
    return ConceptClass::extensional(std::move(lifted_pool), std::move(lifted));
}

/// Labeled examples (x, h(x)) as a sample of lifted points.
inline Sample lift_labeled_sample(const std::vector<std::pair<Point, bool>>& labeled) {
    std::vector<Point> pts;
    pts.reserve(labeled.size());
    for (const auto& [x, b] : labeled) pts.push_back(lift_point(x, b));
    return Sample(std::move(pts));
}

/// Decodes a lifted reconstruction back to the original concept whose
/// graph it equals; the projection side of the monotone-to-proper bridge.
inline std::size_t proper_decode(const ConceptClass& H, const PointSet& reconstruction) {
    std::vector<Point> pts = reconstruction.materialize();
    for (std::size_t i = 0; i < H.concepts().size(); ++i)
        if (concept_graph(H.pool(), H.concepts()[i]) == pts) return i;
    throw error(errc::not_in_class, "reconstruction is not the graph of any class member");
}

} // namespace mcs
