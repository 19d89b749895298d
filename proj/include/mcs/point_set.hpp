#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mcs/error.hpp"
#include "mcs/point.hpp"
#include "mcs/scaffold.hpp"

namespace mcs {

/// An exact finite set of Points with a structural (lazy) representation.
///
/// Ladder reconstructions denote sets like {x} u {y < x : idx(y) in D}
/// whose cardinality grows with coordinate magnitudes; materializing them
/// would dominate every validation run. A PointSet instead answers
/// membership in O(depth) and enumerates elements on demand, so callers
/// that only need coverage checks never pay for the full extension.
///
/// Value semantics over an immutable shared node; safe to share across
/// threads.
class PointSet {
public:
    enum class Kind { empty, explicit_set, nat_prefix, segment, set_union };

    PointSet() : impl_(empty_impl()) {}

    /// Explicit finite set; input is deduplicated and sorted.
    static PointSet of(std::vector<Point> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.empty()) return PointSet();
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::explicit_set;
        impl->points = std::move(pts);
        return PointSet(std::move(impl));
    }

    /// {(0), (1), ..., (top)} — the depth-0 initial segment up to and
    /// including top.
    static PointSet nat_prefix(Coord top) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::nat_prefix;
        impl->top = top;
        return PointSet(std::move(impl));
    }

    /// {max} u {y < max : collapse(y) in inner}, the ladder-segment shape.
    /// `inner` holds depth-(k-1) indices; membership expands through the
    /// canonical injection.
    static PointSet segment(Point max, PointSet inner) {
        if (max.arity() < 2)
            throw error(errc::depth_unsupported, "segment sets require arity >= 2");
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::segment;
        impl->seg_max = std::move(max);
        impl->parts.push_back(std::move(inner));
        return PointSet(std::move(impl));
    }

    static PointSet union_of(std::vector<PointSet> parts) {
        std::vector<PointSet> kept;
        kept.reserve(parts.size());
        for (auto& p : parts)
            if (!p.empty()) kept.push_back(std::move(p));
        if (kept.empty()) return PointSet();
        if (kept.size() == 1) return kept.front();
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::set_union;
        impl->parts = std::move(kept);
        return PointSet(std::move(impl));
    }

    Kind kind() const noexcept { return impl_->kind; }
    bool empty() const noexcept { return impl_->kind == Kind::empty; }

    bool contains(const Point& p) const {
        const Impl& im = *impl_;
        switch (im.kind) {
            case Kind::empty:
                return false;
            case Kind::explicit_set:
                return std::binary_search(im.points.begin(), im.points.end(), p);
            case Kind::nat_prefix:
                return p.arity() == 1 && p[0] <= im.top;
            case Kind::segment:
                if (p == im.seg_max) return true;
                return p.arity() == im.seg_max.arity() && p < im.seg_max &&
                       im.parts[0].contains(collapse_leading_pair(p));
            case Kind::set_union:
                for (const auto& part : im.parts)
                    if (part.contains(p)) return true;
                return false;
        }
        return false;
    }

    bool contains_all(const Sample& s) const {
        for (const Point& p : s)
            if (!contains(p)) return false;
        return true;
    }

    /// Visits each element exactly once; `fn` returns false to stop early.
    /// Returns true iff the enumeration ran to completion.
    bool for_each(const std::function<bool(const Point&)>& fn) const {
        const Impl& im = *impl_;
        switch (im.kind) {
            case Kind::empty:
                return true;
            case Kind::explicit_set:
                for (const Point& p : im.points)
                    if (!fn(p)) return false;
                return true;
            case Kind::nat_prefix:
                for (Coord v = 0;; ++v) {
                    if (!fn(Point{v})) return false;
                    if (v == im.top) return true;
                }
            case Kind::segment: {
                if (!fn(im.seg_max)) return false;
                return im.parts[0].for_each([&](const Point& d) {
                    Point y = expand_leading_coord(d);
                    if (y < im.seg_max) return fn(y);
                    return true;
                });
            }
            case Kind::set_union:
                for (std::size_t i = 0; i < im.parts.size(); ++i) {
                    bool done = im.parts[i].for_each([&](const Point& p) {
                        for (std::size_t j = 0; j < i; ++j)
                            if (im.parts[j].contains(p)) return true;
                        return fn(p);
                    });
                    if (!done) return false;
                }
                return true;
        }
        return true;
    }

    /// Enumerates like for_each but charges one unit of `work` per node
    /// visited at any nesting level, including elements a segment filter
    /// rejects. Returns false once the budget is spent; lets callers put a
    /// hard ceiling on walks over adversarially deep sets.
    bool for_each_limited(const std::function<bool(const Point&)>& fn,
                          std::uint64_t& work) const {
        const Impl& im = *impl_;
        switch (im.kind) {
            case Kind::empty:
                return true;
            case Kind::explicit_set:
                for (const Point& p : im.points) {
                    if (work == 0) return false;
                    --work;
                    if (!fn(p)) return false;
                }
                return true;
            case Kind::nat_prefix:
                for (Coord v = 0;; ++v) {
                    if (work == 0) return false;
                    --work;
                    if (!fn(Point{v})) return false;
                    if (v == im.top) return true;
                }
            case Kind::segment: {
                if (work == 0) return false;
                --work;
                if (!fn(im.seg_max)) return false;
                return im.parts[0].for_each_limited(
                    [&](const Point& d) {
                        Point y = expand_leading_coord(d);
                        if (y < im.seg_max) return fn(y);
                        return true;
                    },
                    work);
            }
            case Kind::set_union:
                for (std::size_t i = 0; i < im.parts.size(); ++i) {
                    bool done = im.parts[i].for_each_limited(
                        [&](const Point& p) {
                            for (std::size_t j = 0; j < i; ++j)
                                if (im.parts[j].contains(p)) return true;
                            return fn(p);
                        },
                        work);
                    if (!done) return false;
                }
                return true;
        }
        return true;
    }

    /// Exact cardinality if computable within the work budget.
    std::optional<std::uint64_t> size_within(std::uint64_t work) const {
        switch (impl_->kind) {
            case Kind::empty:
                return 0;
            case Kind::explicit_set:
                return impl_->points.size();
            case Kind::nat_prefix:
                return impl_->top + 1;
            default: {
                std::uint64_t n = 0;
                bool done = for_each_limited(
                    [&](const Point&) {
                        ++n;
                        return true;
                    },
                    work);
                if (!done) return std::nullopt;
                return n;
            }
        }
    }

    /// Exact cardinality. May enumerate; prefer contains() in hot paths.
    std::uint64_t size() const {
        switch (impl_->kind) {
            case Kind::empty:
                return 0;
            case Kind::explicit_set:
                return impl_->points.size();
            case Kind::nat_prefix:
                return impl_->top + 1;
            default: {
                std::uint64_t n = 0;
                for_each([&](const Point&) {
                    ++n;
                    return true;
                });
                return n;
            }
        }
    }

    /// All elements, sorted ascending. Throws CapExceeded beyond `cap`.
    std::vector<Point> materialize(std::size_t cap = 1'000'000) const {
        std::vector<Point> out;
        bool done = for_each([&](const Point& p) {
            if (out.size() >= cap) return false;
            out.push_back(p);
            return true;
        });
        if (!done)
            throw error(errc::cap_exceeded,
                        "set has more than " + std::to_string(cap) + " elements");
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Common arity of the contents, or nullopt for the empty set.
    std::optional<std::size_t> arity() const {
        switch (impl_->kind) {
            case Kind::empty:
                return std::nullopt;
            case Kind::explicit_set:
                return impl_->points.front().arity();
            case Kind::nat_prefix:
                return 1;
            case Kind::segment:
                return impl_->seg_max.arity();
            case Kind::set_union:
                return impl_->parts.front().arity();
        }
        return std::nullopt;
    }

    // Structural accessors for fast-path accumulation.
    Coord prefix_top() const { return impl_->top; }
    const std::vector<PointSet>& union_parts() const { return impl_->parts; }
    const std::vector<Point>& explicit_points() const { return impl_->points; }

private:
    struct Impl {
        Kind kind = Kind::empty;
        std::vector<Point> points;    // explicit_set: sorted, unique
        Coord top = 0;                // nat_prefix
        Point seg_max;                // segment
        std::vector<PointSet> parts;  // segment: inner; set_union: members
    };

    explicit PointSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    static std::shared_ptr<const Impl> empty_impl() {
        static const std::shared_ptr<const Impl> e = std::make_shared<Impl>();
        return e;
    }

    std::shared_ptr<const Impl> impl_;
};

/// Accumulates a finite set incrementally. Keeps a watermark for runs of
/// depth-0 prefixes so absorbing {(0)..(v)} is O(1) when already covered;
/// everything else lands in a hash set. Newly seen points are appended to
/// the caller's delta vector, which drives semi-naive fixed-point loops.
class SetBuilder {
public:
    bool contains(const Point& p) const {
        if (prefix_top_ && p.arity() == 1 && p[0] <= *prefix_top_) return true;
        return extra_.count(p) != 0;
    }

    bool add(const Point& p, std::vector<Point>* delta = nullptr) {
        if (contains(p)) return false;
        extra_.insert(p);
        if (delta) delta->push_back(p);
        return true;
    }

    /// Structural union; returns true iff anything new was absorbed.
    bool absorb(const PointSet& s, std::vector<Point>* delta = nullptr) {
        switch (s.kind()) {
            case PointSet::Kind::empty:
                return false;
            case PointSet::Kind::nat_prefix: {
                Coord v = s.prefix_top();
                if (prefix_top_ && v <= *prefix_top_) return false;
                bool grew = false;
                Coord start = prefix_top_ ? *prefix_top_ + 1 : 0;
                for (Coord c = start;; ++c) {
                    Point p{c};
                    if (!extra_.count(p)) {
                        grew = true;
                        if (delta) delta->push_back(p);
                    }
                    if (c == v) break;
                }
                prefix_top_ = v;
                return grew;
            }
            case PointSet::Kind::set_union: {
                bool grew = false;
                for (const auto& part : s.union_parts()) grew |= absorb(part, delta);
                return grew;
            }
            default: {
                bool grew = false;
                s.for_each([&](const Point& p) {
                    grew |= add(p, delta);
                    return true;
                });
                return grew;
            }
        }
    }

    std::uint64_t size() const {
        std::uint64_t n = prefix_top_ ? *prefix_top_ + 1 : 0;
        for (const Point& p : extra_)
            if (!(prefix_top_ && p.arity() == 1 && p[0] <= *prefix_top_)) ++n;
        return n;
    }

    PointSet to_point_set() const {
        std::vector<Point> rest;
        rest.reserve(extra_.size());
        for (const Point& p : extra_)
            if (!(prefix_top_ && p.arity() == 1 && p[0] <= *prefix_top_)) rest.push_back(p);
        std::vector<PointSet> parts;
        if (prefix_top_) parts.push_back(PointSet::nat_prefix(*prefix_top_));
        if (!rest.empty()) parts.push_back(PointSet::of(std::move(rest)));
        return PointSet::union_of(std::move(parts));
    }

    std::vector<Point> sorted_points() const {
        return to_point_set().materialize(std::numeric_limits<std::size_t>::max());
    }

private:
    std::optional<Coord> prefix_top_;
    std::unordered_set<Point, PointHash> extra_;
};

} // namespace mcs
