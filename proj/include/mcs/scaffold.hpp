#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "mcs/error.hpp"
#include "mcs/pairing.hpp"
#include "mcs/point.hpp"

namespace mcs {

enum class Ordering { less, equal, greater };

/// Canonical segment injection: collapse the two leading coordinates with
/// the Cantor pairing, (a, b, rest...) -> (pi(a,b), rest...).
inline Point collapse_leading_pair(const Point& y) {
    std::vector<Coord> coords;
    coords.reserve(y.arity() - 1);
    coords.push_back(cantor_pair(y[0], y[1]));
    for (std::size_t i = 2; i < y.arity(); ++i) coords.push_back(y[i]);
    return Point(std::move(coords));
}

/// Inverse of collapse_leading_pair.
inline Point expand_leading_coord(const Point& d) {
    auto [a, b] = cantor_unpair(d[0]);
    std::vector<Coord> coords;
    coords.reserve(d.arity() + 1);
    coords.push_back(a);
    coords.push_back(b);
    for (std::size_t i = 1; i < d.arity(); ++i) coords.push_back(d[i]);
    return Point(std::move(coords));
}

/// A stratified well-ordered domain of finite depth. The canonical depth-k
/// scaffold is the set of (k+1)-tuples of naturals under lexicographic
/// order; at depth >= 1 the strict initial segment below any element is
/// re-indexed into the depth-(k-1) scaffold by collapsing the two leading
/// coordinates with the Cantor pairing. Every stratum is infinite, yet at
/// depth 0 each element has finitely many predecessors.
///
/// Scaffolds are immutable value objects; every operation is a pure
/// function, so instances can be shared freely across threads.
class Scaffold {
public:
    explicit Scaffold(std::size_t depth) : depth_(depth) {}

    std::size_t depth() const noexcept { return depth_; }
    std::size_t arity() const noexcept { return depth_ + 1; }

    /// Scaffold one level down; requires depth >= 1.
    Scaffold lower() const {
        if (depth_ == 0)
            throw error(errc::depth_unsupported, "depth-0 scaffold has no lower level");
        return Scaffold(depth_ - 1);
    }

    void check_arity(const Point& p) const {
        if (p.arity() != arity())
            throw error(errc::arity_mismatch,
                        "point arity " + std::to_string(p.arity()) +
                            " does not match scaffold arity " + std::to_string(arity()));
    }

    /// Lexicographic comparison of two points of this scaffold.
    Ordering compare(const Point& x, const Point& y) const {
        check_arity(x);
        check_arity(y);
        auto c = x <=> y;
        if (c < 0) return Ordering::less;
        if (c > 0) return Ordering::greater;
        return Ordering::equal;
    }

    bool precedes(const Point& x, const Point& y) const {
        return compare(x, y) == Ordering::less;
    }

    /// The full strict initial segment {y : y < x}. Finite only at depth 0;
    /// deeper strata have infinite segments and must go through
    /// segment_index instead.
    std::vector<Point> predecessors(const Point& x) const {
        check_arity(x);
        if (depth_ != 0)
            throw error(errc::depth_unsupported,
                        "initial segments are infinite at depth >= 1; use segment_index");
        std::vector<Point> out;
        out.reserve(static_cast<std::size_t>(x[0]));
        for (Coord v = 0; v < x[0]; ++v) out.push_back(Point{v});
        return out;
    }

    /// Injects a predecessor y of x into the depth-(k-1) scaffold. For
    /// canonical scaffolds the injection collapses the two leading
    /// coordinates: idx(a, b, rest...) = (pi(a, b), rest...). It does not
    /// depend on x beyond the precondition y < x.
    Point segment_index(const Point& x, const Point& y) const {
        check_arity(x);
        check_arity(y);
        if (depth_ == 0)
            throw error(errc::depth_unsupported, "segment_index requires depth >= 1");
        if (!(y < x))
            throw error(errc::not_a_predecessor, "y does not strictly precede x");
        return collapse_leading_pair(y);
    }

    /// The unique point mapping to `index` under the segment injection,
    /// regardless of whether it precedes any particular x. Callers filter
    /// by order when reconstructing a segment.
    Point segment_preimage(const Point& index) const {
        if (depth_ == 0)
            throw error(errc::depth_unsupported, "segment_preimage requires depth >= 1");
        if (index.arity() != arity() - 1)
            throw error(errc::arity_mismatch, "index arity must be scaffold arity - 1");
        return expand_leading_coord(index);
    }

    bool operator==(const Scaffold&) const = default;

private:
    std::size_t depth_;
};

} // namespace mcs
