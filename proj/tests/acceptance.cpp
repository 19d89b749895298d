// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit status is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcs/emx.hpp"
#include "mcs/experiments.hpp"
#include "mcs/json_io.hpp"
#include "mcs/pqr.hpp"
#include "mcs/schemes.hpp"
#include "mcs/shatter.hpp"
#include "mcs/transforms.hpp"
#include "pqr_oracle.hpp"

using namespace mcs;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<Point> nat_pool(Coord n) {
    std::vector<Point> pool;
    for (Coord v = 0; v < n; ++v) pool.push_back(Point{v});
    return pool;
}

// -------------------------------------------------------------------------
// 1. Ladder validity: depths 0..2, 1000 random samples each (sizes <= 40),
//    100% valid with compression sizes <= depth+1.
// -------------------------------------------------------------------------
Outcome criterion_ladder_validity() {
    std::uint64_t checked = 0;
    for (std::size_t depth : {0u, 1u, 2u}) {
        Coord max_coord = depth == 0 ? 1'000'000 : 50;
        MonotoneScheme scheme = ladder_scheme(Scaffold(depth));
        std::mt19937_64 rng(derive_seed(20'240'601, depth));
        std::uniform_int_distribution<std::size_t> len(0, 40);
        std::uniform_int_distribution<Coord> coord(0, max_coord);
        for (int t = 0; t < 1000; ++t) {
            std::vector<Point> pts;
            std::size_t n = len(rng);
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Coord> cs;
                for (std::size_t d = 0; d <= depth; ++d) cs.push_back(coord(rng));
                pts.emplace_back(std::move(cs));
            }
            Sample s(std::move(pts));
            Compressed c = scheme.compress(s);
            if (c.sample.size() > depth + 1)
                return {false, "compression size exceeded the bound at depth " +
                                   std::to_string(depth)};
            ValidationResult v = validate(scheme, s);
            if (!v) return {false, "validation failed at depth " + std::to_string(depth) +
                                       ": " + v.reason};
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " samples valid, sizes within depth+1"};
}

// -------------------------------------------------------------------------
// 2. Leave-one-out bound: uniform P on 10 points, omega scheme (d = 1),
//    m = 9, 1e5 trials. Mean regret within 3 stderr of the closed form
//    sum_{i=1..9} i^9 / 10^10 and below the bound 1/10.
// -------------------------------------------------------------------------
Outcome criterion_loo_bound() {
    double closed_form = 0.0;  // sum of P(max <= j) / 10 over j < 9
    for (double i = 1; i <= 9; ++i) closed_form += std::pow(i / 10.0, 9) / 10.0;

    ConceptClass fin = ConceptClass::fin_subsets(Scaffold(0));
    Learner loo = make_loo_learner(ladder_scheme(Scaffold(0)), fin);
    Distribution P = Distribution::uniform(nat_pool(10));
    RegretReport r = regret_experiment(loo, P, fin, 9, 100'000, 7);

    std::ostringstream detail;
    detail << "mean " << r.mean_regret << " vs closed form " << closed_form << " (3 stderr = "
           << 3 * r.stderr_of_mean << "), bound " << *r.bound;
    bool close = std::abs(r.mean_regret - closed_form) <= 3.0 * r.stderr_of_mean;
    bool bounded = r.mean_regret <= *r.bound;
    return {close && bounded, detail.str()};
}

// -------------------------------------------------------------------------
// 3. O(1/eps) rate: sweep m in {9,19,39,79,159}, 1e4 trials each; the
//    log-log slope of mean regret vs m must lie in [-1.25, -0.75].
// -------------------------------------------------------------------------
Outcome criterion_rate_evidence() {
    ScalingResult r = run_scaling({9, 19, 39, 79, 159}, 10'000, 7);
    std::ostringstream detail;
    detail << "slope " << r.slope << " in [-1.25, -0.75]";
    return {r.slope >= -1.25 && r.slope <= -0.75, detail.str()};
}

// -------------------------------------------------------------------------
// 4. Generalization of the enumeration learner: k = 1,
//    m = sample_size(1, 1/3, 1/3) = 134, 1e4 runs against 20 random
//    finite-support distributions; the frequency of regret > 1/3 must not
//    exceed delta = 1/3.
// -------------------------------------------------------------------------
Outcome criterion_lw_generalization() {
    std::size_t m = sample_size(1, 1.0 / 3.0, 1.0 / 3.0);
    if (m != 134) return {false, "sample_size(1,1/3,1/3) = " + std::to_string(m) + ", want 134"};
    LwExperimentConfig cfg;
    cfg.k = 1;
    cfg.epsilon = 1.0 / 3.0;
    cfg.delta = 1.0 / 3.0;
    cfg.trials = 10'000;
    cfg.num_dists = 20;
    cfg.seed = 7;
    LwExperimentResult r = run_lw_experiment(cfg);
    std::ostringstream detail;
    detail << "m = " << r.m << ", freq(regret > 1/3) = " << r.freq_exceeding << " <= 1/3";
    return {r.m == 134 && r.freq_exceeding <= 1.0 / 3.0, detail.str()};
}

// -------------------------------------------------------------------------
// 5. Extraction: max-learner (d0 = 3) over finite subsets of {0..99}; for
//    1e3 random samples of size <= 8, compression size <= ceil(3*3/2) = 5
//    and the reconstruction covers every sample. Exact.
// -------------------------------------------------------------------------
Outcome criterion_extraction() {
    ConceptClass fin = ConceptClass::fin_subsets(Scaffold(0));
    MonotoneScheme scheme = extract_compression(make_max_learner(3), fin, 8);
    if (scheme.size_bound() != 5)
        return {false, "size bound " + std::to_string(scheme.size_bound()) + ", want 5"};

    std::size_t max_size = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        std::mt19937_64 rng(derive_seed(55, t));
        std::size_t len = rng() % 9;
        std::vector<Point> pts;
        for (std::size_t i = 0; i < len; ++i) pts.push_back(Point{rng() % 100});
        Sample s(std::move(pts));
        Compressed c = scheme.compress(s);
        max_size = std::max(max_size, c.sample.size());
        if (c.sample.size() > 5)
            return {false, "compression of size " + std::to_string(c.sample.size())};
        if (!scheme.reconstruct(c.sample, c.side).contains_all(s))
            return {false, "reconstruction missed a sample element"};
    }
    return {true, "1000 samples covered, max compression size " + std::to_string(max_size)};
}

// -------------------------------------------------------------------------
// 6. Transform soundness: uniformize, decrease_size and
//    imperfect_to_perfect outputs pass exhaustive_validate (and the search
//    certificate check) on pools of size <= 12; labeled_lift preserves VC
//    dimension under brute-force shattering.
// -------------------------------------------------------------------------
Outcome criterion_transforms() {
    // uniformize an omega family over a 12-point pool, samples up to size 4
    {
        std::map<std::size_t, MonotoneScheme> members;
        GrowthFunction f = GrowthFunction::power_of_two();
        for (std::uint64_t mp = 0; f.eval(mp) <= 16; ++mp) {
            std::size_t key = static_cast<std::size_t>(f.eval(mp));
            MonotoneScheme omega = omega_scheme();
            members.emplace(key, MonotoneScheme(
                                     "omega@" + std::to_string(key), 1,
                                     [omega](const Sample& s) { return omega.compress(s); },
                                     [omega](const Sample& c, const SideInfo& si) {
                                         return omega.reconstruct(c, si);
                                     },
                                     key));
        }
        MonotoneScheme uniform = uniformize(SchemeFamily(std::move(members)), f);
        for (std::size_t p = 0; p <= 4; ++p) {
            ExhaustiveResult r = exhaustive_validate(uniform, nat_pool(12), p);
            if (!r.ok) return {false, "uniformize failed at p = " + std::to_string(p)};
        }
    }

    // decrease_size: omega over {0..99} restricted to a 12-point subpool
    {
        MonotoneScheme reduced = decrease_size(omega_scheme(), nat_pool(100), nat_pool(12), 1);
        ExhaustiveResult r = exhaustive_validate(reduced, nat_pool(12), 1);
        if (!r.ok) return {false, "decrease_size output failed validation"};
    }

    // imperfect_to_perfect on a 12-point pool at p = 3, checked both by
    // exhaustive validation and as a search certificate
    {
        PqScheme in;
        in.pool = nat_pool(12);
        in.p = 3;
        in.q = 1;
        in.r = 2;
        in.sigma = [](const std::vector<Point>& s) {
            return std::vector<Point>{*std::max_element(s.begin(), s.end())};
        };
        in.eta = [](const std::vector<Point>& t) {
            std::vector<Point> out;
            for (Coord v = 0; v <= t.front()[0]; ++v) out.push_back(Point{v});
            return out;
        };
        PqScheme out = imperfect_to_perfect(in);
        ExhaustiveResult r = exhaustive_validate(as_monotone_scheme(out), out.pool, out.p);
        if (!r.ok) return {false, "imperfect_to_perfect output failed validation"};

        // same output as a certificate for the search module's verifier
        PqrCertificate cert;
        std::vector<char> used(1u << 12, 0);
        for_each_combination(12, 3, [&](const std::vector<std::size_t>& idx) {
            std::vector<Point> subset;
            for (std::size_t i : idx) subset.push_back(Point{static_cast<Coord>(i)});
            std::vector<Point> kept = out.sigma(subset);
            Mask smask = 0, tmask = 0;
            for (std::size_t i : idx) smask |= Mask{1} << i;
            for (const Point& pt : kept) tmask |= Mask{1} << pt[0];
            cert.sigma.emplace_back(smask, tmask);
            if (!used[tmask]) {
                used[tmask] = 1;
                Mask emask = 0;
                for (const Point& pt : out.eta(kept)) emask |= Mask{1} << pt[0];
                cert.eta.emplace_back(tmask, emask);
            }
            return true;
        });
        PqrInstance inst{12, 3, 2, 3, 12};
        if (!verify_certificate(inst, cert))
            return {false, "perfect pair rejected by verify_certificate"};
    }

    // labeled_lift preserves VC dimension: every class over |X| <= 3, plus
    // seeded random classes over |X| in {4,5} with |H| <= 16
    std::uint64_t classes_checked = 0;
    for (Coord n = 1; n <= 3; ++n) {
        std::vector<std::vector<Point>> concepts_all;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<Point> h;
            for (Coord v = 0; v < n; ++v)
                if (mask & (1u << v)) h.push_back(Point{v});
            concepts_all.push_back(h);
        }
        std::size_t families = std::size_t{1} << concepts_all.size();
        for (std::size_t fam = 0; fam < families; ++fam) {
            std::vector<std::vector<Point>> concepts;
            for (std::size_t i = 0; i < concepts_all.size(); ++i)
                if (fam & (std::size_t{1} << i)) concepts.push_back(concepts_all[i]);
            ConceptClass H = ConceptClass::extensional(nat_pool(n), concepts);
            ConceptClass lifted = labeled_lift(H);
            if (lifted.concepts().size() != H.concepts().size())
                return {false, "labeled_lift changed the class cardinality"};
            if (vc_dimension(lifted) != vc_dimension(H))
                return {false, "labeled_lift changed the VC dimension"};
            ++classes_checked;
        }
    }
    std::mt19937_64 rng(2025);
    for (int t = 0; t < 200; ++t) {
        Coord n = 4 + static_cast<Coord>(t % 2);
        std::vector<std::vector<Point>> concepts;
        std::size_t hs = 1 + rng() % 16;
        for (std::size_t i = 0; i < hs; ++i) {
            unsigned mask = static_cast<unsigned>(rng() % (1u << n));
            std::vector<Point> h;
            for (Coord v = 0; v < n; ++v)
                if (mask & (1u << v)) h.push_back(Point{v});
            concepts.push_back(h);
        }
        ConceptClass H = ConceptClass::extensional(nat_pool(n), concepts);
        if (vc_dimension(labeled_lift(H)) != vc_dimension(H))
            return {false, "labeled_lift changed the VC dimension on a random class"};
        ++classes_checked;
    }
    return {true, "all transforms validated; " + std::to_string(classes_checked) +
                      " classes VC-checked"};
}

// -------------------------------------------------------------------------
// 7. Search correctness: full grid n <= 6, p <= 3, q < p, q <= r <= p,
//    q <= B <= n against the reachability oracle; frozen verdicts
//    reproduced; counting_bound has no false positives; feasibility is
//    monotone in B.
// -------------------------------------------------------------------------
Outcome criterion_search() {
    if (search_pqr({5, 2, 1, 2, 2}).feasible())
        return {false, "(5,2,1,r=2,B=2) should be infeasible"};
    PqrResult feasible4 = search_pqr({4, 2, 1, 2, 3});
    if (!feasible4.feasible() || !verify_certificate({4, 2, 1, 2, 3}, *feasible4.certificate))
        return {false, "(4,2,1,r=2,B=3) should be feasible with a valid certificate"};

    std::uint64_t cells = 0;
    for (unsigned n = 1; n <= 6; ++n)
        for (unsigned p = 2; p <= 3; ++p)
            for (unsigned q = 1; q < p; ++q)
                for (unsigned r = q; r <= p; ++r) {
                    bool prev = false;
                    for (unsigned budget = q; budget <= n; ++budget) {
                        PqrInstance inst{n, p, q, r, budget};
                        PqrResult got = search_pqr(inst);
                        bool expected = pqr_feasible_by_reachability(n, p, q, r, budget);
                        ++cells;
                        std::string cell = " at n=" + std::to_string(n) +
                                           " p=" + std::to_string(p) + " q=" + std::to_string(q) +
                                           " r=" + std::to_string(r) +
                                           " B=" + std::to_string(budget);
                        if (got.feasible() != expected)
                            return {false, "search disagrees with the oracle" + cell};
                        if (got.feasible() && !verify_certificate(inst, *got.certificate))
                            return {false, "certificate failed verification" + cell};
                        if (r == p && counting_bound(inst) && expected)
                            return {false, "counting_bound false positive" + cell};
                        if (prev && !got.feasible())
                            return {false, "feasibility is not monotone in B" + cell};
                        prev = got.feasible();
                    }
                }
    return {true, std::to_string(cells) + " grid cells agree with the oracle"};
}

// -------------------------------------------------------------------------
// 8. Determinism: re-running any seeded experiment with the same config
//    yields byte-identical CSV.
// -------------------------------------------------------------------------
Outcome criterion_determinism() {
    ConceptClass fin = ConceptClass::fin_subsets(Scaffold(0));
    Learner loo = make_loo_learner(ladder_scheme(Scaffold(0)), fin);
    Distribution P = Distribution::uniform(nat_pool(10));
    std::string learn_a = regret_csv(regret_experiment(loo, P, fin, 9, 5'000, 7));
    std::string learn_b = regret_csv(regret_experiment(loo, P, fin, 9, 5'000, 7));
    if (learn_a != learn_b) return {false, "learn CSV differs between runs"};

    std::string scale_a = scaling_csv(run_scaling({9, 19, 39}, 1'000, 3));
    std::string scale_b = scaling_csv(run_scaling({9, 19, 39}, 1'000, 3));
    if (scale_a != scale_b) return {false, "scaling CSV differs between runs"};

    LwExperimentConfig cfg;
    cfg.trials = 500;
    cfg.num_dists = 10;
    cfg.seed = 17;
    std::string lw_a = lw_csv(run_lw_experiment(cfg));
    std::string lw_b = lw_csv(run_lw_experiment(cfg));
    if (lw_a != lw_b) return {false, "lw CSV differs between runs"};

    return {true, "learn, scaling and lw CSV byte-identical across reruns"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {"ladder validity (depths 0-2, 1000 samples each)", criterion_ladder_validity},
        {"leave-one-out regret bound (m=9, 1e5 trials)", criterion_loo_bound},
        {"O(1/eps) rate evidence (log-log slope)", criterion_rate_evidence},
        {"enumeration-learner generalization (m=134, 1e4 runs)", criterion_lw_generalization},
        {"compression extraction (d0=3, 1e3 samples)", criterion_extraction},
        {"transform soundness (pools <= 12, VC preservation)", criterion_transforms},
        {"search correctness (grid n<=6 vs oracle)", criterion_search},
        {"seeded CSV determinism", criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, outcome.detail.c_str(), secs);
        if (!outcome.pass) ++failures;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures;
}
