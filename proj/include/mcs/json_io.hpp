#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "mcs/emx.hpp"
#include "mcs/error.hpp"
#include "mcs/point.hpp"
#include "mcs/pqr.hpp"
#include "mcs/schemes.hpp"
#include "mcs/transforms.hpp"

namespace mcs::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Points and samples: a point is a JSON array of naturals, e.g. [2,5]
// ---------------------------------------------------------------------------

inline json to_json(const Point& p) {
    json a = json::array();
    for (Coord c : p.coords()) a.push_back(c);
    return a;
}

inline Point point_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw error(errc::config_error, "a point must be a nonempty array of naturals");
    std::vector<Coord> coords;
    for (const auto& c : j) {
        if (!c.is_number_unsigned())
            throw error(errc::config_error, "point coordinates must be naturals");
        coords.push_back(c.get<Coord>());
    }
    return Point(std::move(coords));
}

inline json to_json(const Sample& s) {
    json a = json::array();
    for (const Point& p : s) a.push_back(to_json(p));
    return a;
}

inline Sample sample_from_json(const json& j) {
    if (!j.is_array()) throw error(errc::config_error, "a sample must be an array of points");
    std::vector<Point> pts;
    for (const auto& p : j) pts.push_back(point_from_json(p));
    return Sample(std::move(pts));
}

inline std::vector<Point> points_from_json(const json& j) {
    if (!j.is_array()) throw error(errc::config_error, "expected an array of points");
    std::vector<Point> pts;
    for (const auto& p : j) pts.push_back(point_from_json(p));
    return pts;
}

// ---------------------------------------------------------------------------
// Schemes: extensional tables are {"d":…, "sigma":[[S,S'],…], "eta":[[S',set],…]};
// ladder schemes are {"kind":"ladder","depth":k}
// ---------------------------------------------------------------------------

inline json to_json(const SchemeTable& t) {
    json j;
    j["d"] = t.size_bound;
    j["sigma"] = json::array();
    for (const auto& [key, value] : t.sigma) j["sigma"].push_back({to_json(key), to_json(value)});
    j["eta"] = json::array();
    for (const auto& [key, value] : t.eta) {
        json set = json::array();
        for (const Point& p : value) set.push_back(to_json(p));
        j["eta"].push_back({to_json(key), set});
    }
    return j;
}

inline SchemeTable table_from_json(const json& j) {
    SchemeTable t;
    if (!j.contains("d") || !j.contains("sigma") || !j.contains("eta"))
        throw error(errc::config_error, "an extensional scheme needs d, sigma and eta");
    t.size_bound = j.at("d").get<std::size_t>();
    for (const auto& entry : j.at("sigma")) {
        if (!entry.is_array() || entry.size() != 2)
            throw error(errc::config_error, "sigma entries are [sample, compression] pairs");
        t.sigma.emplace_back(sample_from_json(entry[0]), sample_from_json(entry[1]));
    }
    for (const auto& entry : j.at("eta")) {
        if (!entry.is_array() || entry.size() != 2)
            throw error(errc::config_error, "eta entries are [compression, set] pairs");
        t.eta.emplace_back(sample_from_json(entry[0]), points_from_json(entry[1]));
    }
    return t;
}

inline json ladder_json(std::size_t depth) {
    json j;
    j["kind"] = "ladder";
    j["depth"] = depth;
    return j;
}

/// Parses a scheme description: a ladder descriptor or an extensional
/// table.
inline MonotoneScheme scheme_from_json(const json& j) {
    if (!j.is_object()) throw error(errc::config_error, "a scheme must be a JSON object");
    if (j.contains("kind")) {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "ladder") return ladder_scheme(Scaffold(j.at("depth").get<std::size_t>()));
        throw error(errc::config_error, "unknown scheme kind: " + kind);
    }
    return make_table_scheme(table_from_json(j));
}

// ---------------------------------------------------------------------------
// Distributions and concept classes
// ---------------------------------------------------------------------------

inline json to_json(const Distribution& d) {
    json j;
    j["support"] = json::array();
    for (const Point& p : d.support()) j["support"].push_back(to_json(p));
    j["weights"] = d.weights();
    return j;
}

inline Distribution distribution_from_json(const json& j) {
    if (!j.contains("support") || !j.contains("weights"))
        throw error(errc::config_error, "a distribution needs support and weights");
    std::vector<double> weights;
    for (const auto& w : j.at("weights")) {
        if (!w.is_number()) throw error(errc::config_error, "weights must be numbers");
        weights.push_back(w.get<double>());
    }
    return Distribution(points_from_json(j.at("support")), std::move(weights));
}

inline json to_json(const ConceptClass& c) {
    json j;
    if (c.kind() == ConceptClass::Kind::fin_subsets) {
        j["kind"] = "fin_subsets";
        j["depth"] = c.domain().depth();
        return j;
    }
    j["kind"] = "extensional";
    j["pool"] = json::array();
    for (const Point& p : c.pool()) j["pool"].push_back(to_json(p));
    j["concepts"] = json::array();
    for (const auto& h : c.concepts()) {
        json set = json::array();
        for (const Point& p : h) set.push_back(to_json(p));
        j["concepts"].push_back(set);
    }
    return j;
}

inline ConceptClass class_from_json(const json& j) {
    std::string kind = j.value("kind", "extensional");
    if (kind == "fin_subsets")
        return ConceptClass::fin_subsets(Scaffold(j.at("depth").get<std::size_t>()));
    if (kind != "extensional")
        throw error(errc::config_error, "unknown class kind: " + kind);
    std::vector<std::vector<Point>> concepts;
    for (const auto& h : j.at("concepts")) concepts.push_back(points_from_json(h));
    return ConceptClass::extensional(points_from_json(j.at("pool")), std::move(concepts));
}

// ---------------------------------------------------------------------------
// Growth functions
// ---------------------------------------------------------------------------

inline json to_json(const GrowthFunction& f) {
    json j;
    switch (f.kind()) {
        case GrowthFunction::Kind::identity:
            j["kind"] = "identity";
            break;
        case GrowthFunction::Kind::power:
            j["kind"] = "power-of-two";
            if (f.base() != 2) {
                j["kind"] = "power";
                j["base"] = f.base();
            }
            break;
        case GrowthFunction::Kind::tower:
            j["kind"] = "tower";
            break;
    }
    return j;
}

inline GrowthFunction growth_from_json(const json& j) {
    std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
    if (kind == "identity") return GrowthFunction::identity();
    if (kind == "power-of-two") return GrowthFunction::power_of_two();
    if (kind == "power")
        return GrowthFunction::power(j.is_object() ? j.value("base", std::uint64_t{2}) : 2);
    if (kind == "tower") return GrowthFunction::tower();
    throw error(errc::config_error, "unknown growth function: " + kind);
}

// ---------------------------------------------------------------------------
// Scheme families and table-form pq pairs
// ---------------------------------------------------------------------------

inline SchemeFamily family_from_json(const json& j) {
    if (j.value("kind", "") != "family")
        throw error(errc::config_error, "expected a scheme family object");
    std::map<std::size_t, MonotoneScheme> members;
    for (const auto& entry : j.at("members")) {
        if (!entry.is_array() || entry.size() != 2)
            throw error(errc::config_error, "family members are [m, scheme] pairs");
        members.emplace(entry[0].get<std::size_t>(), scheme_from_json(entry[1]));
    }
    return SchemeFamily(std::move(members));
}

/// Table-form (p -> q -> r) pair.
struct PqTable {
    std::vector<Point> pool;
    std::size_t p = 0, q = 0, r = 0;
    std::vector<std::pair<std::vector<Point>, std::vector<Point>>> sigma;
    std::vector<std::pair<std::vector<Point>, std::vector<Point>>> eta;
};

inline json to_json(const PqTable& t) {
    json j;
    j["pool"] = json::array();
    for (const Point& p : t.pool) j["pool"].push_back(to_json(p));
    j["p"] = t.p;
    j["q"] = t.q;
    j["r"] = t.r;
    auto emit = [](const std::vector<std::pair<std::vector<Point>, std::vector<Point>>>& tab) {
        json a = json::array();
        for (const auto& [key, value] : tab) {
            json k = json::array(), v = json::array();
            for (const Point& p : key) k.push_back(to_json(p));
            for (const Point& p : value) v.push_back(to_json(p));
            a.push_back({k, v});
        }
        return a;
    };
    j["sigma"] = emit(t.sigma);
    j["eta"] = emit(t.eta);
    return j;
}

inline PqTable pq_table_from_json(const json& j) {
    PqTable t;
    t.pool = points_from_json(j.at("pool"));
    t.p = j.at("p").get<std::size_t>();
    t.q = j.at("q").get<std::size_t>();
    t.r = j.at("r").get<std::size_t>();
    auto read = [](const json& a) {
        std::vector<std::pair<std::vector<Point>, std::vector<Point>>> tab;
        for (const auto& entry : a) {
            if (!entry.is_array() || entry.size() != 2)
                throw error(errc::config_error, "table entries are [key, value] pairs");
            tab.emplace_back(points_from_json(entry[0]), points_from_json(entry[1]));
        }
        return tab;
    };
    t.sigma = read(j.at("sigma"));
    t.eta = read(j.at("eta"));
    return t;
}

/// Lookup-backed PqScheme from a table.
inline PqScheme pq_scheme_from_table(const PqTable& t) {
    PqScheme s;
    s.pool = t.pool;
    s.p = t.p;
    s.q = t.q;
    s.r = t.r;
    auto sigma = std::make_shared<std::vector<std::pair<std::vector<Point>, std::vector<Point>>>>(
        t.sigma);
    auto eta = std::make_shared<std::vector<std::pair<std::vector<Point>, std::vector<Point>>>>(
        t.eta);
    auto lookup = [](const std::vector<std::pair<std::vector<Point>, std::vector<Point>>>& tab,
                     const std::vector<Point>& key) -> const std::vector<Point>& {
        for (const auto& [k, v] : tab)
            if (k == key) return v;
        throw error(errc::missing_table_entry, "no table entry for the given subset");
    };
    s.sigma = [sigma, lookup](const std::vector<Point>& subset) { return lookup(*sigma, subset); };
    s.eta = [eta, lookup](const std::vector<Point>& subset) { return lookup(*eta, subset); };
    return s;
}

/// Tabulates a PqScheme over every p-subset of its pool (and the q-subsets
/// sigma uses), in pool order.
inline PqTable tabulate_pq(const PqScheme& s) {
    PqTable t;
    t.pool = s.pool;
    t.p = s.p;
    t.q = s.q;
    t.r = s.r;
    std::vector<std::vector<Point>> used;
    for_each_combination(s.pool.size(), s.p, [&](const std::vector<std::size_t>& idx) {
        std::vector<Point> subset;
        subset.reserve(s.p);
        for (std::size_t i : idx) subset.push_back(s.pool[i]);
        std::vector<Point> kept = s.sigma(subset);
        t.sigma.emplace_back(subset, kept);
        if (std::find(used.begin(), used.end(), kept) == used.end()) {
            used.push_back(kept);
            t.eta.emplace_back(kept, s.eta(kept));
        }
        return true;
    });
    return t;
}

// ---------------------------------------------------------------------------
// Search certificates
// ---------------------------------------------------------------------------

inline json mask_to_json(Mask m) {
    json a = json::array();
    for (unsigned e : mask_elements(m)) a.push_back(e);
    return a;
}

inline Mask mask_from_json(const json& j) {
    std::vector<unsigned> elems;
    for (const auto& e : j) elems.push_back(e.get<unsigned>());
    return mask_from_elements(elems);
}

inline json to_json(const PqrCertificate& cert) {
    json j;
    j["sigma"] = json::array();
    for (const auto& [s, t] : cert.sigma) j["sigma"].push_back({mask_to_json(s), mask_to_json(t)});
    j["eta"] = json::array();
    for (const auto& [t, e] : cert.eta) j["eta"].push_back({mask_to_json(t), mask_to_json(e)});
    return j;
}

inline PqrCertificate certificate_from_json(const json& j) {
    PqrCertificate cert;
    for (const auto& entry : j.at("sigma"))
        cert.sigma.emplace_back(mask_from_json(entry[0]), mask_from_json(entry[1]));
    for (const auto& entry : j.at("eta"))
        cert.eta.emplace_back(mask_from_json(entry[0]), mask_from_json(entry[1]));
    return cert;
}

} // namespace mcs::io
