#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "mcs/error.hpp"

namespace mcs {

using Coord = std::uint64_t;

/// An element of a scaffold domain: a finite tuple of naturals. Depth-k
/// scaffolds use (k+1)-tuples.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<Coord> coords) : coords_(std::move(coords)) {}
    Point(std::initializer_list<Coord> coords) : coords_(coords) {}

    std::size_t arity() const noexcept { return coords_.size(); }
    const std::vector<Coord>& coords() const noexcept { return coords_; }
    Coord operator[](std::size_t i) const { return coords_[i]; }

    auto operator<=>(const Point&) const = default;

private:
    std::vector<Coord> coords_;
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (std::size_t i = 0; i < p.arity(); ++i) {
        if (i) os << ',';
        os << p[i];
    }
    return os << ')';
}

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        // FNV-1a over coordinates.
        std::uint64_t h = 1469598103934665603ull;
        for (Coord c : p.coords()) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// A finite sequence of Points. Order is significant and duplicates are
/// allowed; all elements must share one arity.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<Point> pts) : points_(std::move(pts)) { check_arity(); }
    Sample(std::initializer_list<Point> pts) : points_(pts) { check_arity(); }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }
    const std::vector<Point>& points() const noexcept { return points_; }

    void push_back(Point p) {
        if (!points_.empty() && p.arity() != points_.front().arity())
            throw error(errc::arity_mismatch, "sample elements must share one arity");
        points_.push_back(std::move(p));
    }

    bool operator==(const Sample&) const = default;

private:
    void check_arity() const {
        for (const Point& p : points_)
            if (p.arity() != points_.front().arity())
                throw error(errc::arity_mismatch, "sample elements must share one arity");
    }

    std::vector<Point> points_;
};

/// True iff `sub` embeds into `seq` as a subsequence (multiplicity
/// respecting, order preserving).
inline bool is_subsequence(const Sample& sub, const Sample& seq) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i)
        if (seq[i] == sub[j]) ++j;
    return j == sub.size();
}

/// Distinct elements of a sample in ascending order.
inline std::vector<Point> sorted_distinct(const Sample& s) {
    std::vector<Point> out(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace mcs
