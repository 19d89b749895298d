#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef MCS_CLI_PATH
#define MCS_CLI_PATH "mcs"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(MCS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

ordered_json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    ordered_json j;
    in >> j;
    return j;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mcs_cli_test_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli exit codes distinguish config and contract errors") {
    TempDir tmp;
    std::string base = "--out-dir " + tmp.path.string() + " ";
    // unknown flag / missing subcommand: config error
    REQUIRE(run_cli("definitely-not-a-subcommand") == 2);
    REQUIRE(run_cli(base + "validate --p 2") == 2);  // missing --pool
    // arity mismatch inside a module: contract error
    REQUIRE(run_cli(base + "ladder --depth 0 --sample \"[[1,2]]\"") == 1);
    // a clean run
    REQUIRE(run_cli(base + "ladder --depth 0 --sample \"[[3],[1],[4]]\"") == 0);
    // infeasible searches still exit 0
    REQUIRE(run_cli(base + "pqr --n 5 --p 2 --q 1 --r 2 --budget 2") == 0);
}

TEST_CASE("replaying a report's embedded config reproduces it byte-for-byte") {
    TempDir tmp;
    fs::path first = tmp.path / "first";
    fs::path second = tmp.path / "second";
    REQUIRE(run_cli("learn --m 9 --trials 400 --seed 7 --out-dir " + first.string()) == 0);

    ordered_json report = read_json(first / "learn_report.json");
    fs::path cfg = tmp.path / "cfg.json";
    {
        std::ofstream out(cfg);
        out << report.at("config").dump();
    }
    REQUIRE(run_cli("learn --config " + cfg.string() + " --out-dir " + second.string()) == 0);

    ordered_json replay = read_json(second / "learn_report.json");
    report.erase("timestamp");
    replay.erase("timestamp");
    REQUIRE(report == replay);
    REQUIRE(read_text(first / "learn_trials.csv") == read_text(second / "learn_trials.csv"));
}

TEST_CASE("csv trial data follows the fixed schema") {
    TempDir tmp;
    REQUIRE(run_cli("learn --m 4 --trials 10 --seed 1 --out-dir " + tmp.path.string()) == 0);
    std::string csv = read_text(tmp.path / "learn_trials.csv");
    REQUIRE(csv.rfind("trial,regret\n", 0) == 0);
    REQUIRE(csv.find("\r") == std::string::npos);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 11);  // header + 10 rows
}
