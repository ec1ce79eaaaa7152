#pragma once

#include "tripa/analysis.hpp"
#include "tripa/params.hpp"
#include "tripa/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tripa {

// Resolved experiment configuration. Loaded from a flat key-value config file
// and/or CLI flags; numeric model parameters stay decimal strings so the
// exact-rational path sees unrounded values.
struct ExperimentConfig {
    std::string p = "1", q = "0", r = "1";
    std::int64_t steps = 100000;
    std::vector<std::uint64_t> seeds = {1};
    unsigned jobs = 0;  // 0: one worker per seed up to the hardware limit
    unsigned w_max = 64;
    unsigned d_max = 200;
    unsigned w_cap = 64, d_cap = 128;  // occupancy caps
    std::vector<VertexLabel> track = {0};
    std::string out = "out";
    bool exact = false;
    std::int64_t trials = 1'000'000;
    unsigned support_cap = 32;
    std::int64_t window_lo = 0, window_hi = 0;  // 0: [steps/100, steps]
    std::vector<std::int64_t> checkpoints;      // empty: geometric from 10^3
    std::string kernel_state = "init";          // init | six | <snapshot.json>
    double tol_tv = 0.01;
    double tol_slope = 0.05;
    double tol_ratio = 0.1;
    double tol_x21 = 0.01;
    double tail_tolerance = 1e-8;

    ModelParams model_params() const { return ModelParams::from_strings(p, q, r); }
    std::vector<std::int64_t> resolved_checkpoints() const;
    std::pair<std::int64_t, std::int64_t> resolved_window() const;
    OccupancyCaps occupancy_caps() const { return {w_cap, d_cap}; }

    std::string canonical_text() const;  // one "key = value" line per field
    std::uint64_t hash() const;
    void validate() const;  // throws std::invalid_argument
};

// key/value setter shared by the config-file loader and the CLI;
// throws std::invalid_argument for unknown keys or bad values
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base = {});

// ratio 10^(1/8) spacing from 10^3 up to steps (log-uniform abscissae for fits)
std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps);

// Exit codes: 0 pass, 2 verdict fail. Usage problems (bad config, missing
// inputs) throw; the CLI maps those to exit code 1.
int cmd_theory(const ExperimentConfig& config);
int cmd_simulate(const ExperimentConfig& config);
int cmd_compare(const ExperimentConfig& config);
int cmd_kernel_test(const ExperimentConfig& config);
int cmd_all(const ExperimentConfig& config);

}  // namespace tripa
