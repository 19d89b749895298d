#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mcs/emx.hpp"
#include "mcs/error.hpp"
#include "mcs/rng.hpp"
#include "mcs/schemes.hpp"

namespace mcs {

/// Shortest round-trip decimal form with '.' separator; the CSV number
/// format, stable across runs.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw error(errc::config_error, "double formatting failed");
    return std::string(buf, ptr);
}

/// Per-trial CSV for regret runs: header `trial,regret`, one row per
/// trial, LF line endings.
inline std::string regret_csv(const RegretReport& report) {
    std::string out = "trial,regret\n";
    for (std::size_t t = 0; t < report.per_trial.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(report.per_trial[t]);
        out += '\n';
    }
    return out;
}

/// A random finite-support distribution: 1..max_support distinct points
/// with normalized positive weights. Fully determined by the generator
/// state.
inline Distribution random_distribution(std::mt19937_64& rng, std::size_t max_support,
                                        Coord coord_max) {
    std::size_t size = 1 + static_cast<std::size_t>(rng() % max_support);
    std::unordered_set<Coord> seen;
    std::vector<Point> support;
    while (support.size() < size) {
        Coord v = rng() % (coord_max + 1);
        if (seen.insert(v).second) support.push_back(Point{v});
    }
    std::vector<double> weights(size);
    double sum = 0.0;
    for (double& w : weights) {
        w = uniform01(rng) + 1e-3;  // bounded away from zero
        sum += w;
    }
    for (double& w : weights) w /= sum;
    return Distribution(std::move(support), std::move(weights));
}

// ---------------------------------------------------------------------------
// Subsample-enumeration learner experiment
// ---------------------------------------------------------------------------

struct LwExperimentConfig {
    std::size_t k = 1;
    double epsilon = 1.0 / 3.0;
    double delta = 1.0 / 3.0;
    std::optional<std::size_t> m;  // defaults to sample_size(k, epsilon, delta)
    std::uint64_t trials = 10'000;
    std::uint64_t num_dists = 20;
    std::size_t support_max = 30;
    Coord coord_max = 1'000'000;
    std::uint64_t seed = 0;
};

struct LwExperimentResult {
    std::size_t m = 0;
    std::uint64_t trials = 0;
    std::uint64_t exceed_count = 0;
    double freq_exceeding = 0.0;
    std::vector<double> per_trial;
};

/// Runs the enumeration learner over random finite-support distributions
/// and measures how often regret exceeds epsilon. Trials rotate through
/// `num_dists` distributions; both the distributions and the samples are
/// derived deterministically from the seed.
inline LwExperimentResult run_lw_experiment(const LwExperimentConfig& cfg) {
    if (cfg.trials < 1 || cfg.num_dists < 1)
        throw error(errc::config_error, "trials and num_dists must be >= 1");
    MonotoneScheme scheme = ladder_scheme(Scaffold(0));
    if (cfg.k != scheme.size_bound())
        throw error(errc::config_error, "only k = 1 (the omega scheme) is built in");
    ConceptClass fin = ConceptClass::fin_subsets(Scaffold(0));

    LwExperimentResult result;
    result.m = cfg.m ? *cfg.m : sample_size(cfg.k, cfg.epsilon, cfg.delta);
    result.trials = cfg.trials;
    result.per_trial.reserve(cfg.trials);

    std::vector<Distribution> dists;
    dists.reserve(cfg.num_dists);
    for (std::uint64_t i = 0; i < cfg.num_dists; ++i) {
        std::mt19937_64 rng(derive_seed(cfg.seed ^ 0xD157D157D157D157ull, i));
        dists.push_back(random_distribution(rng, cfg.support_max, cfg.coord_max));
    }

    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        const Distribution& P = dists[t % cfg.num_dists];
        std::mt19937_64 rng(derive_seed(cfg.seed, t));
        Sample s = P.sample_n(rng, result.m);
        PointSet h = lw_learn(scheme, fin, s);
        double regret = 1.0 - P.expectation(h);  // opt = 1 for fin_subsets
        if (regret < 0.0 && regret > -1e-9) regret = 0.0;
        result.per_trial.push_back(regret);
        if (regret > cfg.epsilon) ++result.exceed_count;
    }
    result.freq_exceeding =
        static_cast<double>(result.exceed_count) / static_cast<double>(cfg.trials);
    return result;
}

inline std::string lw_csv(const LwExperimentResult& result) {
    std::string out = "trial,regret\n";
    for (std::size_t t = 0; t < result.per_trial.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(result.per_trial[t]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Regret-versus-m scaling sweep
// ---------------------------------------------------------------------------

struct ScalingPoint {
    std::size_t m = 0;
    double mean_regret = 0.0;
    double stderr_of_mean = 0.0;
    double bound = 0.0;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    double slope = 0.0;  // least-squares slope of log(mean) vs log(m)
};

/// Sweeps the leave-one-out learner over sample sizes. Each sweep point
/// uses the uniform distribution on {0..m}: the support grows with the
/// sample so the d/(m+1) regime stays binding (a fixed support would decay
/// exponentially instead).
inline ScalingResult run_scaling(const std::vector<std::size_t>& ms, std::uint64_t trials,
                                 std::uint64_t seed) {
    if (ms.size() < 2) throw error(errc::config_error, "scaling needs at least two sizes");
    ConceptClass fin = ConceptClass::fin_subsets(Scaffold(0));
    Learner loo = make_loo_learner(ladder_scheme(Scaffold(0)), fin);

    ScalingResult result;
    for (std::size_t m : ms) {
        std::vector<Point> support;
        for (Coord v = 0; v <= m; ++v) support.push_back(Point{v});
        Distribution P = Distribution::uniform(std::move(support));
        RegretReport r = regret_experiment(loo, P, fin, m, trials, derive_seed(seed, m));
        result.points.push_back({m, r.mean_regret, r.stderr_of_mean, r.bound.value_or(0.0)});
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(result.points.size());
    for (const ScalingPoint& pt : result.points) {
        double x = std::log(static_cast<double>(pt.m));
        double y = std::log(pt.mean_regret);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    result.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return result;
}

inline std::string scaling_csv(const ScalingResult& result) {
    std::string out = "m,mean_regret,stderr,bound\n";
    for (const ScalingPoint& pt : result.points) {
        out += std::to_string(pt.m);
        out += ',';
        out += format_double(pt.mean_regret);
        out += ',';
        out += format_double(pt.stderr_of_mean);
        out += ',';
        out += format_double(pt.bound);
        out += '\n';
    }
    return out;
}

} // namespace mcs
