// tripa: simulator and analytic toolkit for the three-vertex-interaction
// preferential attachment model. Subcommands: theory, simulate, compare,
// kernel-test, all. Exit codes: 0 success/pass, 1 usage error, 2 verdict fail.

#include "tripa/experiment.hpp"
#include "tripa/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct RawOptions {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> entries;  // flag overrides, in order
};

void add_override(CLI::App* cmd, RawOptions& raw, const std::string& flag,
                  const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
           flag,
           [&raw, key](const std::string& value) { raw.entries.emplace_back(key, value); },
           help)
        ->type_name("TEXT");
}

void add_common_options(CLI::App* cmd, RawOptions& raw) {
    cmd->add_option("--config", raw.config_file, "flat key = value config file");
    add_override(cmd, raw, "--p", "p", "new-vertex step probability (decimal string)");
    add_override(cmd, raw, "--q", "q", "preferential triangle probability");
    add_override(cmd, raw, "--r", "r", "preferential edge probability");
    add_override(cmd, raw, "--steps", "steps", "number of steps");
    add_override(cmd, raw, "--seeds", "seeds", "comma-separated seed list");
    add_override(cmd, raw, "--jobs", "jobs", "parallel workers (0 = one per seed)");
    add_override(cmd, raw, "--w-max", "w_max", "theory table depth in w");
    add_override(cmd, raw, "--d-max", "d_max", "degree marginal depth");
    add_override(cmd, raw, "--w-cap", "w_cap", "occupancy cap in w");
    add_override(cmd, raw, "--d-cap", "d_cap", "occupancy cap in d");
    add_override(cmd, raw, "--track", "track", "tracked vertex labels, e.g. 0,-1");
    add_override(cmd, raw, "--out", "out", "output directory");
    add_override(cmd, raw, "--exact", "exact", "exact rational tables (true/false)");
    add_override(cmd, raw, "--trials", "trials", "kernel test trials");
    add_override(cmd, raw, "--support-cap", "support_cap", "TV comparison support cap in w");
    add_override(cmd, raw, "--window-lo", "window_lo", "fit window lower bound");
    add_override(cmd, raw, "--window-hi", "window_hi", "fit window upper bound");
    add_override(cmd, raw, "--checkpoints", "checkpoints", "explicit checkpoint list");
    add_override(cmd, raw, "--kernel-state", "kernel_state",
                 "init, six, or a snapshot path");
    add_override(cmd, raw, "--tol-tv", "tol_tv", "TV tolerance");
    add_override(cmd, raw, "--tol-slope", "tol_slope", "slope tolerance");
    add_override(cmd, raw, "--tol-ratio", "tol_ratio", "ratio tolerance");
    add_override(cmd, raw, "--tol-x21", "tol_x21", "x_{2,1} tolerance");
    add_override(cmd, raw, "--tail-tolerance", "tail_tolerance",
                 "degree-marginal truncation tolerance");
}

tripa::ExperimentConfig resolve(const RawOptions& raw) {
    tripa::ExperimentConfig config;
    if (!raw.config_file.empty()) config = tripa::load_config_file(raw.config_file, config);
    for (const auto& [key, value] : raw.entries)
        tripa::apply_config_entry(config, key, value);
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-vertex-interaction preferential attachment toolkit"};
    app.set_version_flag("--version", std::string("tripa ") + tripa::kVersion);
    app.require_subcommand(1);

    RawOptions raw;
    auto* theory = app.add_subcommand("theory", "limit distributions and asymptote tables");
    auto* simulate = app.add_subcommand("simulate", "run the model and write checkpoints");
    auto* compare = app.add_subcommand("compare", "verdict of simulation vs theory");
    auto* kernel = app.add_subcommand("kernel-test", "chi-square test of the step kernel");
    auto* all = app.add_subcommand("all", "theory + simulate + compare");
    for (auto* cmd : {theory, simulate, compare, kernel, all})
        add_common_options(cmd, raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 1;  // usage problems exit 1, --help/--version exit 0
    }

    try {
        const tripa::ExperimentConfig config = resolve(raw);
        if (theory->parsed()) return tripa::cmd_theory(config);
        if (simulate->parsed()) return tripa::cmd_simulate(config);
        if (compare->parsed()) return tripa::cmd_compare(config);
        if (kernel->parsed()) return tripa::cmd_kernel_test(config);
        if (all->parsed()) return tripa::cmd_all(config);
    } catch (const std::exception& error) {
        std::cerr << "tripa: error: " << error.what() << "\n";
        return 1;
    }
    return 1;
}
