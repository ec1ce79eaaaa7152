#include <doctest.h>

#include "tripa/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() /
                         ("tripa_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli.log";
    const std::string command =
        std::string(TRIPA_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (fs::exists(log)) result.output = tripa::read_file(log);
    return result;
}

bool file_contains(const fs::path& path, const std::string& needle) {
    return tripa::read_file(path).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("theory subcommand writes the limit tables") {
    const auto dir = fresh_dir("theory");
    const auto result = run_cli(
        "theory --p 1 --q 0 --r 1 --w-max 4 --d-max 20 --out " + dir.string(), dir);
    CHECK(result.exit_code == 0);
    CHECK(file_contains(dir / "theory" / "joint.csv", "\n1,2,0.6\n"));
    CHECK(file_contains(dir / "theory" / "weight.csv", "config_hash"));
    CHECK(fs::exists(dir / "theory" / "meta.json"));
    CHECK(fs::exists(dir / "theory" / "degree_marginal.csv"));
    CHECK(fs::exists(dir / "theory" / "asymptote.csv"));
    // alpha1 = 0: no gaussian table for this parameter set
    CHECK_FALSE(fs::exists(dir / "theory" / "gaussian.csv"));
}

TEST_CASE("exact mode emits rationals as num/den strings") {
    const auto dir = fresh_dir("exact");
    const auto result = run_cli(
        "theory --p 1 --q 0 --r 1 --w-max 4 --exact true --out " + dir.string(), dir);
    CHECK(result.exit_code == 0);
    CHECK(file_contains(dir / "theory" / "weight.csv", "\n1,3/5\n"));
    CHECK(file_contains(dir / "theory" / "joint.csv", "\n2,3,6/35\n"));
}

TEST_CASE("usage errors exit with code 1") {
    const auto dir = fresh_dir("usage");
    CHECK(run_cli("theory --w-max 0 --out " + dir.string(), dir).exit_code == 1);
    CHECK(run_cli("frobnicate", dir).exit_code == 1);
    CHECK(run_cli("theory --p 1.5 --out " + dir.string(), dir).exit_code == 1);
    const auto missing = run_cli("compare --out " + dir.string() + "/nowhere", dir);
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("missing input files") != std::string::npos);
    CHECK(missing.output.find("joint.csv") != std::string::npos);
}

TEST_CASE("simulate: checkpoints, determinism, exact vertex count at p=1") {
    const auto dir = fresh_dir("simulate");
    const std::string args = "simulate --p 1 --q 0 --r 1 --steps 10 --seeds 5 "
                             "--checkpoints 10 --out " + (dir / "a").string();
    CHECK(run_cli(args, dir).exit_code == 0);
    const auto csv = tripa::read_csv(dir / "a" / "sim" / "run_seed5.csv");
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][csv.column("n")] == "10");
    CHECK(csv.rows[0][csv.column("V")] == "13");  // p=1: V_n = n+3

    // re-running the identical config reproduces identical bytes
    const std::string run_bytes = tripa::read_file(dir / "a" / "sim" / "run_seed5.csv");
    const std::string occ_bytes =
        tripa::read_file(dir / "a" / "sim" / "occupancy_seed5.csv");
    const std::string snap_bytes =
        tripa::read_file(dir / "a" / "sim" / "snapshot_seed5.json");
    CHECK(run_cli(args, dir).exit_code == 0);
    CHECK(tripa::read_file(dir / "a" / "sim" / "run_seed5.csv") == run_bytes);
    CHECK(tripa::read_file(dir / "a" / "sim" / "occupancy_seed5.csv") == occ_bytes);
    CHECK(tripa::read_file(dir / "a" / "sim" / "snapshot_seed5.json") == snap_bytes);
}

TEST_CASE("full pipeline verdict and the zero-tolerance failure mode") {
    const auto dir = fresh_dir("pipeline");
    const std::string common =
        "--p 1 --q 0 --r 1 --steps 3000 --seeds 1,2 --w-max 8 --support-cap 4 "
        "--track 0 --out " + dir.string();
    const auto pass = run_cli(
        "all " + common + " --tol-slope 0.5 --tol-ratio 0.5 --tol-tv 0.2 --tol-x21 0.2",
        dir);
    CHECK(pass.exit_code == 0);
    const auto verdict = nlohmann::json::parse(
        tripa::read_file(dir / "compare" / "verdict.json"));
    CHECK(verdict.at("overall_pass").get<bool>());
    CHECK(verdict.at("checks").size() > 0);

    // tolerance 0 must fail and still report the nonzero distances
    const auto fail = run_cli("compare " + common + " --tol-tv 0", dir);
    CHECK(fail.exit_code == 2);
    const auto verdict2 = nlohmann::json::parse(
        tripa::read_file(dir / "compare" / "verdict.json"));
    CHECK_FALSE(verdict2.at("overall_pass").get<bool>());
    bool tv_reported = false;
    for (const auto& check : verdict2.at("checks"))
        if (check.at("name") == "tv_support") {
            tv_reported = true;
            CHECK(check.at("mean").get<double>() > 0.0);
            CHECK_FALSE(check.at("pass").get<bool>());
        }
    CHECK(tv_reported);
}

TEST_CASE("kernel-test subcommand") {
    const auto dir = fresh_dir("kernel");
    const auto result = run_cli(
        "kernel-test --p 1 --q 0 --r 1 --trials 20000 --kernel-state init --out " +
            dir.string(),
        dir);
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("underpowered") != std::string::npos);  // trials < 1e5 warning
    const auto report =
        nlohmann::json::parse(tripa::read_file(dir / "kernel" / "report.json"));
    CHECK(report.at("pass").get<bool>());
    CHECK(report.at("vertices").size() == 3);
}

TEST_CASE("config file with flag overrides") {
    const auto dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "exp.cfg");
        cfg << "# experiment configuration\n"
            << "p = 1\nq = 0\nr = 1\n"
            << "steps = 10\n"
            << "seeds = 9\n"
            << "checkpoints = 10\n"
            << "out = " << (dir / "from_file").string() << "\n";
    }
    const auto result = run_cli("simulate --config " + (dir / "exp.cfg").string() +
                                    " --steps 20 --checkpoints 20",
                                dir);
    CHECK(result.exit_code == 0);
    const auto csv = tripa::read_csv(dir / "from_file" / "sim" / "run_seed9.csv");
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][csv.column("n")] == "20");  // flag wins over file

    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "unknown_key = 1\n";
    }
    CHECK(run_cli("simulate --config " + (dir / "bad.cfg").string(), dir).exit_code == 1);
}
