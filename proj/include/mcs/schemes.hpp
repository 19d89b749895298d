#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcs/combinatorics.hpp"
#include "mcs/error.hpp"
#include "mcs/point.hpp"
#include "mcs/point_set.hpp"
#include "mcs/scaffold.hpp"

namespace mcs {

/// A bounded number of extra bits accompanying a compression.
struct SideInfo {
    std::uint64_t value = 0;
    unsigned bits = 0;  // value < 2^bits

    SideInfo() = default;
    SideInfo(std::uint64_t v, unsigned b) : value(v), bits(b) {
        if (b < 64 && v >= (std::uint64_t{1} << b))
            throw error(errc::invalid_side_info,
                        "value " + std::to_string(v) + " does not fit in " +
                            std::to_string(b) + " bits");
    }

    static SideInfo none() { return SideInfo(); }
    bool operator==(const SideInfo&) const = default;
};

struct Compressed {
    Sample sample;
    SideInfo side;
};

/// A compressor/reconstructor pair with a declared size bound. The
/// compressor must return a subsequence of its input of length <= d; the
/// reconstructor maps any sample of length <= d (plus side information
/// within budget) to a finite set that must contain every admissible input
/// sample. Schemes without a max_input are uniform: they accept samples of
/// every size.
///
/// Instances are immutable and the callables are pure, so schemes are safe
/// for unrestricted concurrent use.
class MonotoneScheme {
public:
    using Compressor = std::function<Compressed(const Sample&)>;
    using Reconstructor = std::function<PointSet(const Sample&, const SideInfo&)>;

    MonotoneScheme(std::string name, std::size_t size_bound, Compressor compress,
                   Reconstructor reconstruct,
                   std::optional<std::size_t> max_input = std::nullopt,
                   std::optional<unsigned> side_bits = 0)
        : name_(std::move(name)),
          size_bound_(size_bound),
          max_input_(max_input),
          side_bits_(side_bits),
          compressor_(std::move(compress)),
          reconstructor_(std::move(reconstruct)) {}

    const std::string& name() const noexcept { return name_; }
    std::size_t size_bound() const noexcept { return size_bound_; }
    std::optional<std::size_t> max_input() const noexcept { return max_input_; }
    bool uniform() const noexcept { return !max_input_.has_value(); }
    std::optional<unsigned> side_bits() const noexcept { return side_bits_; }

    Compressed compress(const Sample& s) const {
        if (max_input_ && s.size() > *max_input_)
            throw error(errc::sample_too_large,
                        "sample of size " + std::to_string(s.size()) +
                            " exceeds scheme max input " + std::to_string(*max_input_));
        return compressor_(s);
    }

    PointSet reconstruct(const Sample& compressed, const SideInfo& side) const {
        if (compressed.size() > size_bound_)
            throw error(errc::sample_too_large,
                        "compressed sample exceeds size bound " + std::to_string(size_bound_));
        if (side_bits_ && (side.bits > *side_bits_ ||
                           (*side_bits_ < 64 && side.value >= (std::uint64_t{1} << *side_bits_))))
            throw error(errc::invalid_side_info, "side value exceeds the scheme's budget");
        return reconstructor_(compressed, side);
    }

private:
    std::string name_;
    std::size_t size_bound_;
    std::optional<std::size_t> max_input_;
    std::optional<unsigned> side_bits_;
    Compressor compressor_;
    Reconstructor reconstructor_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Outcome of a validation run; false carries a diagnostic reason.
struct ValidationResult {
    bool ok = true;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
    static ValidationResult pass() { return {}; }
    static ValidationResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Checks the monotone-scheme contract on one sample: the compression must
/// be a subsequence within the size bound and the reconstruction must cover
/// every input element. Malformed schemes yield false rather than throwing.
inline ValidationResult validate(const MonotoneScheme& scheme, const Sample& s) {
    try {
        Compressed c = scheme.compress(s);
        if (c.sample.size() > scheme.size_bound())
            return ValidationResult::fail("compression of size " +
                                          std::to_string(c.sample.size()) +
                                          " exceeds bound " +
                                          std::to_string(scheme.size_bound()));
        if (!is_subsequence(c.sample, s))
            return ValidationResult::fail("compressor output is not a subsequence of the input");
        PointSet r = scheme.reconstruct(c.sample, c.side);
        for (const Point& p : s)
            if (!r.contains(p)) {
                std::string msg = "reconstruction misses (";
                for (std::size_t i = 0; i < p.arity(); ++i)
                    msg += (i ? "," : "") + std::to_string(p[i]);
                return ValidationResult::fail(msg + ")");
            }
        return ValidationResult::pass();
    } catch (const error& e) {
        return ValidationResult::fail(e.what());
    }
}

struct ExhaustiveResult {
    bool ok = true;
    std::uint64_t checked = 0;
    std::optional<Sample> counterexample;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

/// Validates every size-p sample of distinct pool elements, one canonical
/// (ascending) ordering per subset. Throws CapExceeded when C(|pool|, p)
/// exceeds the enumeration cap.
inline ExhaustiveResult exhaustive_validate(const MonotoneScheme& scheme,
                                            std::vector<Point> pool, std::size_t p,
                                            std::uint64_t cap = 1'000'000) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (binomial(pool.size(), p) > cap)
        throw error(errc::cap_exceeded, "C(" + std::to_string(pool.size()) + "," +
                                            std::to_string(p) + ") exceeds cap " +
                                            std::to_string(cap));
    ExhaustiveResult result;
    for_each_combination(pool.size(), p, [&](const std::vector<std::size_t>& idx) {
        std::vector<Point> pts;
        pts.reserve(p);
        for (std::size_t i : idx) pts.push_back(pool[i]);
        Sample s(std::move(pts));
        ValidationResult v = validate(scheme, s);
        ++result.checked;
        if (!v) {
            result.ok = false;
            result.counterexample = s;
            result.reason = v.reason;
            return false;
        }
        return true;
    });
    return result;
}

// ---------------------------------------------------------------------------
// Ladder schemes
// ---------------------------------------------------------------------------

namespace detail {

/// Positions kept by the depth-k ladder compressor: the maximum (first
/// occurrence) plus the recursively kept re-indexed remainder. Returned
/// ascending, so emitting them preserves input order.
inline std::vector<std::size_t> ladder_keep(std::size_t depth,
                                            const std::vector<Point>& pts) {
    if (pts.empty()) return {};
    std::size_t imax = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[imax] < pts[i]) imax = i;
    // first occurrence of the maximum
    for (std::size_t i = 0; i < imax; ++i)
        if (pts[i] == pts[imax]) {
            imax = i;
            break;
        }
    if (depth == 0) return {imax};

    std::vector<std::size_t> rem_pos;
    std::vector<Point> rem;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i] < pts[imax]) {
            rem_pos.push_back(i);
            rem.push_back(collapse_leading_pair(pts[i]));
        }
    std::vector<std::size_t> kept{imax};
    for (std::size_t r : ladder_keep(depth - 1, rem)) kept.push_back(rem_pos[r]);
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline PointSet ladder_reconstruct(std::size_t depth, const std::vector<Point>& pts) {
    if (pts.empty()) return PointSet();
    Point max = *std::max_element(pts.begin(), pts.end());
    if (depth == 0) return PointSet::nat_prefix(max[0]);
    std::vector<Point> rest;
    for (const Point& p : pts)
        if (p < max) rest.push_back(collapse_leading_pair(p));
    return PointSet::segment(max, ladder_reconstruct(depth - 1, rest));
}

} // namespace detail

/// The recursive (depth+1)-size scheme on a canonical scaffold: keep the
/// maximal element, re-index the strict remainder into the scaffold one
/// level down, and recurse. Reconstruction inverts through the maximum and
/// the lower-level reconstruction of the re-indexed remainder. Depth 0 is
/// the omega scheme: keep the maximum, reconstruct all its predecessors.
inline MonotoneScheme ladder_scheme(const Scaffold& s) {
    std::size_t depth = s.depth();
    std::size_t arity = s.arity();
    auto compressor = [depth, arity](const Sample& in) -> Compressed {
        if (!in.empty() && in[0].arity() != arity)
            throw error(errc::arity_mismatch, "sample arity does not match scaffold");
        std::vector<std::size_t> kept = detail::ladder_keep(depth, in.points());
        std::vector<Point> out;
        out.reserve(kept.size());
        for (std::size_t i : kept) out.push_back(in[i]);
        return Compressed{Sample(std::move(out)), SideInfo::none()};
    };
    auto reconstructor = [depth, arity](const Sample& c, const SideInfo&) -> PointSet {
        if (!c.empty() && c[0].arity() != arity)
            throw error(errc::arity_mismatch, "compressed sample arity does not match scaffold");
        return detail::ladder_reconstruct(depth, c.points());
    };
    return MonotoneScheme("ladder:" + std::to_string(depth), depth + 1,
                          std::move(compressor), std::move(reconstructor));
}

/// Size-1 scheme on the depth-0 scaffold: keep the maximum, reconstruct
/// {0..max}. The empty compression reconstructs to the empty set.
inline MonotoneScheme omega_scheme() { return ladder_scheme(Scaffold(0)); }

// ---------------------------------------------------------------------------
// Table schemes
// ---------------------------------------------------------------------------

struct SampleHash {
    std::size_t operator()(const Sample& s) const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ull ^ s.size();
        PointHash ph;
        for (const Point& p : s) h = (h ^ ph(p)) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

/// A finite extensional scheme given by explicit lookup tables over a
/// finite pool. Matching is by exact sequence; tabulation utilities emit
/// canonical (ascending) orderings.
struct SchemeTable {
    std::size_t size_bound = 0;
    std::vector<std::pair<Sample, Sample>> sigma;
    std::vector<std::pair<Sample, std::vector<Point>>> eta;
};

inline MonotoneScheme make_table_scheme(const SchemeTable& table, std::string name = "table") {
    auto sigma = std::make_shared<std::unordered_map<Sample, Sample, SampleHash>>();
    auto eta = std::make_shared<std::unordered_map<Sample, PointSet, SampleHash>>();
    std::size_t max_input = 0;
    for (const auto& [key, value] : table.sigma) {
        max_input = std::max(max_input, key.size());
        sigma->emplace(key, value);
    }
    for (const auto& [key, value] : table.eta) eta->emplace(key, PointSet::of(value));
    auto compressor = [sigma](const Sample& s) -> Compressed {
        auto it = sigma->find(s);
        if (it == sigma->end())
            throw error(errc::missing_table_entry, "no sigma entry for the given sample");
        return Compressed{it->second, SideInfo::none()};
    };
    auto reconstructor = [eta](const Sample& c, const SideInfo&) -> PointSet {
        auto it = eta->find(c);
        if (it == eta->end())
            throw error(errc::missing_table_entry, "no eta entry for the given compression");
        return it->second;
    };
    return MonotoneScheme(std::move(name), table.size_bound, std::move(compressor),
                          std::move(reconstructor), max_input);
}

/// Tabulates an arbitrary scheme over all canonical samples of distinct
/// pool elements with sizes 0..max_size, producing an extensional table.
inline SchemeTable tabulate_scheme(const MonotoneScheme& scheme, std::vector<Point> pool,
                                   std::size_t max_size, std::uint64_t cap = 1'000'000,
                                   std::size_t materialize_cap = 100'000) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    SchemeTable table;
    table.size_bound = scheme.size_bound();
    std::unordered_map<Sample, bool, SampleHash> seen_eta;
    std::uint64_t total = 0;
    for (std::size_t m = 0; m <= max_size; ++m) total += binomial(pool.size(), m);
    if (total > cap)
        throw error(errc::cap_exceeded, "tabulation would enumerate " + std::to_string(total) +
                                            " samples, above cap " + std::to_string(cap));
    for (std::size_t m = 0; m <= max_size; ++m) {
        for_each_combination(pool.size(), m, [&](const std::vector<std::size_t>& idx) {
            std::vector<Point> pts;
            pts.reserve(m);
            for (std::size_t i : idx) pts.push_back(pool[i]);
            Sample s(std::move(pts));
            Compressed c = scheme.compress(s);
            if (c.side.bits != 0)
                throw error(errc::contract_violated,
                            "cannot tabulate a scheme that emits side information");
            table.sigma.emplace_back(s, c.sample);
            if (!seen_eta.count(c.sample)) {
                seen_eta.emplace(c.sample, true);
                PointSet r = scheme.reconstruct(c.sample, c.side);
                table.eta.emplace_back(c.sample, r.materialize(materialize_cap));
            }
            return true;
        });
    }
    return table;
}

} // namespace mcs
