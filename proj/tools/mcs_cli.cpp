// mcs command-line runner: builds domains, schemes and learners from
// configuration, runs seeded experiments, and emits machine-readable
// reports (JSON always, CSV trial data for Monte Carlo runs).
//
// Exit codes: 0 success, 1 contract errors (printed with the module's
// error name), 2 configuration errors.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcs/emx.hpp"
#include "mcs/error.hpp"
#include "mcs/experiments.hpp"
#include "mcs/json_io.hpp"
#include "mcs/pqr.hpp"
#include "mcs/schemes.hpp"
#include "mcs/shatter.hpp"
#include "mcs/transforms.hpp"

namespace fs = std::filesystem;
using mcs::io::json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "json";
};

std::string timestamp_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mcs::error(mcs::errc::config_error, "cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw mcs::error(mcs::errc::config_error, path + ": " + e.what());
    }
    return j;
}

/// Inline JSON if the argument starts with '[' or '{', otherwise a file path.
json parse_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) {
        try {
            return json::parse(arg);
        } catch (const std::exception& e) {
            throw mcs::error(mcs::errc::config_error, std::string("bad inline JSON: ") + e.what());
        }
    }
    return load_json_file(arg);
}

/// Scheme given as "omega", "ladder:K", or a JSON file / inline object.
mcs::MonotoneScheme scheme_from_spec(const std::string& spec) {
    if (spec == "omega") return mcs::omega_scheme();
    if (spec.rfind("ladder:", 0) == 0)
        return mcs::ladder_scheme(mcs::Scaffold(std::stoul(spec.substr(7))));
    return mcs::io::scheme_from_json(parse_json_arg(spec));
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mcs::error(mcs::errc::config_error, "cannot write " + path.string());
    out << content;
}

/// Assembles a report, writes it (plus optional CSV trial data) under the
/// output directory, and prints to stdout in the requested format. The
/// timestamp lives in its own field; everything else is reproducible from
/// (config, seed).
void emit(const GlobalOpts& g, const std::string& name, const json& config, const json& results,
          const std::string* csv = nullptr) {
    json report;
    report["subcommand"] = name;
    report["timestamp"] = timestamp_utc();
    report["config"] = config;
    report["results"] = results;

    fs::create_directories(g.out_dir);
    write_file(fs::path(g.out_dir) / (name + "_report.json"), report.dump(2) + "\n");
    if (csv) write_file(fs::path(g.out_dir) / (name + "_trials.csv"), *csv);

    if (g.format == "csv" && csv)
        std::cout << *csv;
    else
        std::cout << report.dump(2) << "\n";
}

/// Fills an unset flag from the --config file, so files and flags share
/// one schema (flags win).
template <class T>
void fill(const CLI::Option* opt, T& var, const json& cfg, const std::string& key) {
    if (opt != nullptr && opt->count() == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
}

/// JSON-valued parameters (samples, pools, distributions) are embedded in
/// report configs as structured JSON; on replay they arrive as objects or
/// arrays and are re-serialized for the inline-JSON path.
void fill_json_arg(const CLI::Option* opt, std::string& var, const json& cfg,
                   const std::string& key) {
    if (opt == nullptr || opt->count() > 0 || !cfg.contains(key)) return;
    const json& v = cfg.at(key);
    var = v.is_string() ? v.get<std::string>() : v.dump();
}

json regret_results(const mcs::RegretReport& r, double optimum) {
    json res;
    res["trials"] = r.trials;
    res["mean_regret"] = r.mean_regret;
    res["stderr"] = r.stderr_of_mean;
    if (r.bound)
        res["bound"] = *r.bound;
    else
        res["bound"] = nullptr;
    res["pass"] = r.bound ? json(r.mean_regret <= *r.bound) : json(nullptr);
    res["opt"] = optimum;
    res["seed"] = r.seed;
    return res;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void add_ladder(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("ladder", "compress and reconstruct one sample");
    cmd->fallthrough();
    auto depth = std::make_shared<std::size_t>(0);
    auto sample_arg = std::make_shared<std::string>("[]");
    auto config_path = std::make_shared<std::string>();
    auto* o_depth = cmd->add_option("--depth", *depth, "scaffold depth");
    auto* o_sample = cmd->add_option("--sample", *sample_arg, "sample as JSON, e.g. [[2,5],[1,7]]");
    cmd->add_option("--config", *config_path, "JSON config file with the same keys as the flags");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_depth, *depth, cfg_file, "depth");
        fill_json_arg(o_sample, *sample_arg, cfg_file, "sample");

        mcs::MonotoneScheme scheme = mcs::ladder_scheme(mcs::Scaffold(*depth));
        mcs::Sample sample = mcs::io::sample_from_json(parse_json_arg(*sample_arg));
        mcs::Compressed c = scheme.compress(sample);
        mcs::PointSet r = scheme.reconstruct(c.sample, c.side);
        mcs::ValidationResult v = mcs::validate(scheme, sample);

        json config;
        config["depth"] = *depth;
        config["sample"] = mcs::io::to_json(sample);
        json results;
        results["compression"] = mcs::io::to_json(c.sample);
        results["side"] = {{"value", c.side.value}, {"bits", c.side.bits}};
        results["compression_size"] = c.sample.size();
        results["size_bound"] = scheme.size_bound();
        results["covered"] = v.ok;
        if (auto size = r.size_within(5'000'000))
            results["reconstruction_size"] = *size;
        else
            results["reconstruction_size"] = nullptr;  // too large to count exactly
        emit(g, "ladder", config, results);
    });
}

void add_validate(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("validate", "exhaustively validate a scheme over a pool");
    cmd->fallthrough();
    auto scheme_spec = std::make_shared<std::string>("omega");
    auto pool_arg = std::make_shared<std::string>();
    auto p = std::make_shared<std::size_t>(2);
    auto cap = std::make_shared<std::uint64_t>(1'000'000);
    auto config_path = std::make_shared<std::string>();
    auto* o_scheme = cmd->add_option("--scheme", *scheme_spec, "omega | ladder:K | JSON file");
    auto* o_pool = cmd->add_option("--pool", *pool_arg, "pool as JSON array of points");
    auto* o_p = cmd->add_option("--p", *p, "subset size to quantify over");
    auto* o_cap = cmd->add_option("--cap", *cap, "enumeration cap");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_scheme, *scheme_spec, cfg_file, "scheme");
        fill_json_arg(o_pool, *pool_arg, cfg_file, "pool");
        fill(o_p, *p, cfg_file, "p");
        fill(o_cap, *cap, cfg_file, "cap");
        if (pool_arg->empty())
            throw mcs::error(mcs::errc::config_error, "validate requires --pool");

        mcs::MonotoneScheme scheme = scheme_from_spec(*scheme_spec);
        std::vector<mcs::Point> pool = mcs::io::points_from_json(parse_json_arg(*pool_arg));
        mcs::ExhaustiveResult r = mcs::exhaustive_validate(scheme, pool, *p, *cap);

        json config;
        config["scheme"] = *scheme_spec;
        config["pool"] = parse_json_arg(*pool_arg);
        config["p"] = *p;
        config["cap"] = *cap;
        json results;
        results["ok"] = r.ok;
        results["checked"] = r.checked;
        if (!r.ok) {
            results["counterexample"] = mcs::io::to_json(*r.counterexample);
            results["reason"] = r.reason;
        }
        emit(g, "validate", config, results);
    });
}

void add_transform(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("transform", "apply a scheme-to-scheme transformation");
    cmd->fallthrough();
    auto kind = std::make_shared<std::string>();
    auto scheme_spec = std::make_shared<std::string>("omega");
    auto family_arg = std::make_shared<std::string>();
    auto growth_name = std::make_shared<std::string>("identity");
    auto pool_arg = std::make_shared<std::string>();
    auto subpool_arg = std::make_shared<std::string>();
    auto pq_arg = std::make_shared<std::string>();
    auto class_arg = std::make_shared<std::string>();
    auto k = std::make_shared<std::size_t>(1);
    auto max_p = std::make_shared<std::size_t>(4);
    auto config_path = std::make_shared<std::string>();
    auto* o_kind = cmd->add_option("--kind", *kind,
                                   "uniformize | decrease-size | imperfect-to-perfect | labeled-lift");
    auto* o_scheme = cmd->add_option("--scheme", *scheme_spec, "input scheme (decrease-size)");
    auto* o_family = cmd->add_option("--family", *family_arg, "scheme family JSON (uniformize)");
    auto* o_growth = cmd->add_option("--growth", *growth_name,
                                     "identity | power-of-two | tower (uniformize)");
    auto* o_pool = cmd->add_option("--pool", *pool_arg, "pool as JSON array of points");
    auto* o_subpool = cmd->add_option("--subpool", *subpool_arg, "subpool (decrease-size)");
    auto* o_pq = cmd->add_option("--pq", *pq_arg, "table-form (p->q->r) pair JSON");
    auto* o_class = cmd->add_option("--class", *class_arg, "concept class JSON (labeled-lift)");
    auto* o_k = cmd->add_option("--k", *k, "contract size (decrease-size)");
    auto* o_maxp = cmd->add_option("--max-p", *max_p, "largest sample size to validate");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_kind, *kind, cfg_file, "kind");
        fill(o_scheme, *scheme_spec, cfg_file, "scheme");
        fill_json_arg(o_family, *family_arg, cfg_file, "family");
        fill(o_growth, *growth_name, cfg_file, "growth");
        fill_json_arg(o_pool, *pool_arg, cfg_file, "pool");
        fill_json_arg(o_subpool, *subpool_arg, cfg_file, "subpool");
        fill_json_arg(o_pq, *pq_arg, cfg_file, "pq");
        fill_json_arg(o_class, *class_arg, cfg_file, "class");
        fill(o_k, *k, cfg_file, "k");
        fill(o_maxp, *max_p, cfg_file, "max-p");

        json config;
        config["kind"] = *kind;
        json results;

        if (*kind == "uniformize") {
            if (family_arg->empty())
                throw mcs::error(mcs::errc::config_error, "uniformize requires --family");
            json family_json = parse_json_arg(*family_arg);
            mcs::SchemeFamily fam = mcs::io::family_from_json(family_json);
            mcs::GrowthFunction f = mcs::io::growth_from_json(json(*growth_name));
            mcs::MonotoneScheme uniform = mcs::uniformize(fam, f);
            config["family"] = family_json;
            config["growth"] = *growth_name;
            results["scheme"] = {{"kind", "uniformized"},
                                 {"growth", mcs::io::to_json(f)},
                                 {"family", family_json}};
            results["d"] = uniform.size_bound();
            if (!pool_arg->empty()) {
                config["pool"] = parse_json_arg(*pool_arg);
                config["max-p"] = *max_p;
                std::vector<mcs::Point> pool =
                    mcs::io::points_from_json(parse_json_arg(*pool_arg));
                bool ok = true;
                std::uint64_t checked = 0;
                for (std::size_t p = 0; p <= *max_p; ++p) {
                    mcs::ExhaustiveResult r = mcs::exhaustive_validate(uniform, pool, p);
                    ok = ok && r.ok;
                    checked += r.checked;
                }
                results["validated"] = {{"ok", ok}, {"checked", checked}};
            }
        } else if (*kind == "decrease-size") {
            if (pool_arg->empty() || subpool_arg->empty())
                throw mcs::error(mcs::errc::config_error,
                                 "decrease-size requires --pool and --subpool");
            mcs::MonotoneScheme scheme = scheme_from_spec(*scheme_spec);
            std::vector<mcs::Point> pool = mcs::io::points_from_json(parse_json_arg(*pool_arg));
            std::vector<mcs::Point> subpool =
                mcs::io::points_from_json(parse_json_arg(*subpool_arg));
            mcs::MonotoneScheme reduced = mcs::decrease_size(scheme, pool, subpool, *k);
            config["scheme"] = *scheme_spec;
            config["pool"] = parse_json_arg(*pool_arg);
            config["subpool"] = parse_json_arg(*subpool_arg);
            config["k"] = *k;
            mcs::SchemeTable table = mcs::tabulate_scheme(reduced, subpool, *k);
            mcs::ExhaustiveResult r = mcs::exhaustive_validate(reduced, subpool, *k);
            results["scheme"] = mcs::io::to_json(table);
            results["exhaustive"] = {{"ok", r.ok}, {"checked", r.checked}};
        } else if (*kind == "imperfect-to-perfect") {
            if (pq_arg->empty())
                throw mcs::error(mcs::errc::config_error, "imperfect-to-perfect requires --pq");
            json pq_json = parse_json_arg(*pq_arg);
            mcs::io::PqTable in_table = mcs::io::pq_table_from_json(pq_json);
            mcs::PqScheme in = mcs::io::pq_scheme_from_table(in_table);
            mcs::PqScheme out = mcs::imperfect_to_perfect(in);
            config["pq"] = pq_json;
            mcs::io::PqTable out_table = mcs::io::tabulate_pq(out);
            mcs::ExhaustiveResult r =
                mcs::exhaustive_validate(mcs::as_monotone_scheme(out), out.pool, out.p);
            results["result"] = mcs::io::to_json(out_table);
            results["exhaustive"] = {{"ok", r.ok}, {"checked", r.checked}};
        } else if (*kind == "labeled-lift") {
            if (class_arg->empty())
                throw mcs::error(mcs::errc::config_error, "labeled-lift requires --class");
            json class_json = parse_json_arg(*class_arg);
            mcs::ConceptClass H = mcs::io::class_from_json(class_json);
            mcs::ConceptClass lifted = mcs::labeled_lift(H);
            config["class"] = class_json;
            results["lifted"] = mcs::io::to_json(lifted);
            results["original_size"] = H.concepts().size();
            results["lifted_size"] = lifted.concepts().size();
            results["vc_original"] = mcs::vc_dimension(H);
            results["vc_lifted"] = mcs::vc_dimension(lifted);
            results["vc_preserved"] = mcs::vc_dimension(H) == mcs::vc_dimension(lifted);
        } else {
            throw mcs::error(mcs::errc::config_error, "unknown transform kind: " + *kind);
        }
        emit(g, "transform", config, results);
    });
}

void add_learn(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("learn", "leave-one-out regret experiment");
    cmd->fallthrough();
    auto scheme_spec = std::make_shared<std::string>("omega");
    auto d = std::make_shared<std::size_t>(0);
    auto m = std::make_shared<std::size_t>(9);
    auto trials = std::make_shared<std::uint64_t>(10'000);
    auto dist_arg = std::make_shared<std::string>();
    auto config_path = std::make_shared<std::string>();
    auto* o_scheme = cmd->add_option("--scheme", *scheme_spec, "omega | ladder:K | JSON file");
    auto* o_d = cmd->add_option("--d", *d, "expected scheme size (checked)");
    auto* o_m = cmd->add_option("--m", *m, "sample size per trial");
    auto* o_trials = cmd->add_option("--trials", *trials, "number of trials");
    auto* o_dist = cmd->add_option("--dist", *dist_arg,
                                   "distribution JSON; default uniform on {0..m}");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_scheme, *scheme_spec, cfg_file, "scheme");
        fill(o_d, *d, cfg_file, "d");
        fill(o_m, *m, cfg_file, "m");
        fill(o_trials, *trials, cfg_file, "trials");
        fill_json_arg(o_dist, *dist_arg, cfg_file, "dist");
        if (cfg_file.contains("seed")) g.seed = cfg_file.at("seed").get<std::uint64_t>();

        mcs::MonotoneScheme scheme = scheme_from_spec(*scheme_spec);
        if (o_d->count() > 0 || cfg_file.contains("d")) {
            if (*d != scheme.size_bound())
                throw mcs::error(mcs::errc::config_error,
                                 "--d does not match the scheme's size bound");
        }
        std::size_t depth = scheme.size_bound() - 1;  // ladder schemes only
        mcs::ConceptClass fin = mcs::ConceptClass::fin_subsets(mcs::Scaffold(depth));

        mcs::Distribution P = [&]() {
            if (!dist_arg->empty())
                return mcs::io::distribution_from_json(parse_json_arg(*dist_arg));
            if (depth != 0)
                throw mcs::error(mcs::errc::config_error,
                                 "--dist is required for depth >= 1 schemes");
            std::vector<mcs::Point> support;
            for (mcs::Coord v = 0; v <= *m; ++v) support.push_back(mcs::Point{v});
            return mcs::Distribution::uniform(std::move(support));
        }();

        mcs::Learner loo = mcs::make_loo_learner(scheme, fin);
        mcs::RegretReport r = mcs::regret_experiment(loo, P, fin, *m, *trials, g.seed);

        json config;
        config["scheme"] = *scheme_spec;
        config["m"] = *m;
        config["trials"] = *trials;
        config["seed"] = g.seed;
        config["dist"] = mcs::io::to_json(P);
        std::string csv = mcs::regret_csv(r);
        emit(g, "learn", config, regret_results(r, mcs::opt(P, fin)), &csv);
    });
}

void add_lw_learn(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand(
        "lw-learn", "subsample-enumeration learner over random distributions");
    cmd->fallthrough();
    auto cfg = std::make_shared<mcs::LwExperimentConfig>();
    auto m_flag = std::make_shared<std::size_t>(0);
    auto config_path = std::make_shared<std::string>();
    auto* o_k = cmd->add_option("--k", cfg->k, "scheme size");
    auto* o_eps = cmd->add_option("--epsilon", cfg->epsilon, "accuracy parameter");
    auto* o_delta = cmd->add_option("--delta", cfg->delta, "confidence parameter");
    auto* o_m = cmd->add_option("--m", *m_flag, "sample size; default sample_size(k,eps,delta)");
    auto* o_trials = cmd->add_option("--trials", cfg->trials, "total runs");
    auto* o_dists = cmd->add_option("--dists", cfg->num_dists, "number of random distributions");
    auto* o_support = cmd->add_option("--support-max", cfg->support_max, "max support size");
    auto* o_coord = cmd->add_option("--coord-max", cfg->coord_max, "max coordinate value");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_k, cfg->k, cfg_file, "k");
        fill(o_eps, cfg->epsilon, cfg_file, "epsilon");
        fill(o_delta, cfg->delta, cfg_file, "delta");
        fill(o_m, *m_flag, cfg_file, "m");
        fill(o_trials, cfg->trials, cfg_file, "trials");
        fill(o_dists, cfg->num_dists, cfg_file, "dists");
        fill(o_support, cfg->support_max, cfg_file, "support-max");
        fill(o_coord, cfg->coord_max, cfg_file, "coord-max");
        if (cfg_file.contains("seed")) g.seed = cfg_file.at("seed").get<std::uint64_t>();
        cfg->seed = g.seed;
        if (o_m->count() > 0 || cfg_file.contains("m")) cfg->m = *m_flag;

        mcs::LwExperimentResult r = mcs::run_lw_experiment(*cfg);

        json config;
        config["k"] = cfg->k;
        config["epsilon"] = cfg->epsilon;
        config["delta"] = cfg->delta;
        config["m"] = r.m;
        config["trials"] = cfg->trials;
        config["dists"] = cfg->num_dists;
        config["support-max"] = cfg->support_max;
        config["coord-max"] = cfg->coord_max;
        config["seed"] = g.seed;
        json results;
        results["m"] = r.m;
        results["trials"] = r.trials;
        results["exceed_count"] = r.exceed_count;
        results["freq_exceeding"] = r.freq_exceeding;
        results["delta"] = cfg->delta;
        results["pass"] = r.freq_exceeding <= cfg->delta;
        std::string csv = mcs::lw_csv(r);
        emit(g, "lw-learn", config, results, &csv);
    });
}

void add_extract(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("extract", "compression extracted from a learner");
    cmd->fallthrough();
    auto d0 = std::make_shared<std::size_t>(3);
    auto m = std::make_shared<std::size_t>(8);
    auto pool_size = std::make_shared<mcs::Coord>(100);
    auto samples = std::make_shared<std::uint64_t>(1000);
    auto config_path = std::make_shared<std::string>();
    auto* o_d0 = cmd->add_option("--d0", *d0, "learner sample size");
    auto* o_m = cmd->add_option("--m", *m, "max sample size handled");
    auto* o_pool = cmd->add_option("--pool-size", *pool_size, "sample coordinates below this");
    auto* o_samples = cmd->add_option("--samples", *samples, "number of random samples");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_d0, *d0, cfg_file, "d0");
        fill(o_m, *m, cfg_file, "m");
        fill(o_pool, *pool_size, cfg_file, "pool-size");
        fill(o_samples, *samples, cfg_file, "samples");
        if (cfg_file.contains("seed")) g.seed = cfg_file.at("seed").get<std::uint64_t>();

        mcs::ConceptClass fin = mcs::ConceptClass::fin_subsets(mcs::Scaffold(0));
        mcs::MonotoneScheme scheme =
            mcs::extract_compression(mcs::make_max_learner(*d0), fin, *m);

        std::size_t max_size = 0;
        bool all_covered = true;
        std::string csv = "sample,size,covered\n";
        for (std::uint64_t t = 0; t < *samples; ++t) {
            std::mt19937_64 rng(mcs::derive_seed(g.seed, t));
            std::size_t len = rng() % (*m + 1);
            std::vector<mcs::Point> pts;
            for (std::size_t i = 0; i < len; ++i)
                pts.push_back(mcs::Point{rng() % *pool_size});
            mcs::Sample s(std::move(pts));
            mcs::Compressed c = scheme.compress(s);
            bool covered = scheme.reconstruct(c.sample, c.side).contains_all(s);
            max_size = std::max(max_size, c.sample.size());
            all_covered = all_covered && covered;
            csv += std::to_string(t) + ',' + std::to_string(c.sample.size()) + ',' +
                   (covered ? "1" : "0") + '\n';
        }

        json config;
        config["d0"] = *d0;
        config["m"] = *m;
        config["pool-size"] = *pool_size;
        config["samples"] = *samples;
        config["seed"] = g.seed;
        json results;
        results["size_bound"] = scheme.size_bound();
        results["size_bound_rule"] = "ceil(3*d0/2)";
        results["max_size_observed"] = max_size;
        results["all_covered"] = all_covered;
        results["pass"] = all_covered && max_size <= scheme.size_bound();
        emit(g, "extract", config, results, &csv);
    });
}

void add_pqr(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("pqr", "exact search for the (p->q->r) property");
    cmd->fallthrough();
    auto inst = std::make_shared<mcs::PqrInstance>();
    auto config_path = std::make_shared<std::string>();
    auto* o_n = cmd->add_option("--n", inst->n, "pool size");
    auto* o_p = cmd->add_option("--p", inst->p, "input subset size");
    auto* o_q = cmd->add_option("--q", inst->q, "compressed subset size");
    auto* o_r = cmd->add_option("--r", inst->r, "required overlap");
    auto* o_b = cmd->add_option("--budget", inst->budget, "max reconstruction size");
    auto* o_cap = cmd->add_option("--cap", inst->cap, "enumeration cap");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_n, inst->n, cfg_file, "n");
        fill(o_p, inst->p, cfg_file, "p");
        fill(o_q, inst->q, cfg_file, "q");
        fill(o_r, inst->r, cfg_file, "r");
        fill(o_b, inst->budget, cfg_file, "budget");
        fill(o_cap, inst->cap, cfg_file, "cap");

        mcs::PqrResult r = mcs::search_pqr(*inst);

        json config;
        config["n"] = inst->n;
        config["p"] = inst->p;
        config["q"] = inst->q;
        config["r"] = inst->r;
        config["budget"] = inst->budget;
        config["cap"] = inst->cap;
        json results;
        results["verdict"] = r.feasible() ? "feasible" : "infeasible";
        results["nodes"] = r.nodes;
        if (r.pruned_reason) results["pruned_by"] = *r.pruned_reason;
        if (inst->r == inst->p) results["counting_bound"] = mcs::counting_bound(*inst);
        if (r.certificate) {
            results["certificate"] = mcs::io::to_json(*r.certificate);
            results["certificate_verified"] = mcs::verify_certificate(*inst, *r.certificate);
        }
        emit(g, "pqr", config, results);
    });
}

void add_scaling(CLI::App& app, GlobalOpts& g) {
    auto* cmd = app.add_subcommand("scaling", "regret-vs-m sweep emitting plot-ready CSV");
    cmd->fallthrough();
    auto m_list = std::make_shared<std::string>("9,19,39,79,159");
    auto trials = std::make_shared<std::uint64_t>(10'000);
    auto config_path = std::make_shared<std::string>();
    auto* o_list = cmd->add_option("--m-list", *m_list, "comma-separated sample sizes");
    auto* o_trials = cmd->add_option("--trials", *trials, "trials per sweep point");
    cmd->add_option("--config", *config_path, "JSON config file");
    cmd->callback([=, &g]() {
        json cfg_file = config_path->empty() ? json::object() : load_json_file(*config_path);
        fill(o_list, *m_list, cfg_file, "m-list");
        fill(o_trials, *trials, cfg_file, "trials");
        if (cfg_file.contains("seed")) g.seed = cfg_file.at("seed").get<std::uint64_t>();

        std::vector<std::size_t> ms;
        std::stringstream ss(*m_list);
        for (std::string tok; std::getline(ss, tok, ',');) {
            if (tok.empty()) continue;
            ms.push_back(std::stoul(tok));
        }
        mcs::ScalingResult r = mcs::run_scaling(ms, *trials, g.seed);

        json config;
        config["m-list"] = *m_list;
        config["trials"] = *trials;
        config["seed"] = g.seed;
        json results;
        results["points"] = json::array();
        for (const mcs::ScalingPoint& pt : r.points)
            results["points"].push_back({{"m", pt.m},
                                         {"mean_regret", pt.mean_regret},
                                         {"stderr", pt.stderr_of_mean},
                                         {"bound", pt.bound}});
        results["slope"] = r.slope;
        std::string csv = mcs::scaling_csv(r);
        emit(g, "scaling", config, results, &csv);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"monotone compression schemes, EMX learners, and reconstruction search"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "experiment seed")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "report output directory")->capture_default_str();
    app.add_option("--format", g.format, "stdout format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    add_ladder(app, g);
    add_validate(app, g);
    add_transform(app, g);
    add_learn(app, g);
    add_lw_learn(app, g);
    add_extract(app, g);
    add_pqr(app, g);
    add_scaling(app, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mcs::error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == mcs::errc::config_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
