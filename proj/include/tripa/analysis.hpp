#pragma once

#include "tripa/simulator.hpp"
#include "tripa/theory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tripa {

// --- empirical vs theoretical joint distribution ------------------------------

struct EmpiricalJoint {
    OccupancyCounts counts;
    std::int64_t n = 0;
    std::int64_t vertex_count = 0;
};

EmpiricalJoint empirical_joint(const GraphState& state);
EmpiricalJoint empirical_joint(const TrajectoryRecord& record);

struct TvResult {
    double tv_support = 0;        // (1/2) sum over the support w <= cap
    double emp_tail_mass = 0;     // empirical fraction outside the support cap
    double theory_tail_mass = 0;  // theoretical mass above the cap
    double tv_total = 0;          // conservative: tails counted as discrepancy
    unsigned support_cap = 0;
};

// Half L1 distance between the empirical fractions and x_{d,w} over
// {(d,w): w <= support_cap}; tail masses are reported separately and also
// folded into tv_total. Throws when the caps cannot cover the support.
TvResult tv_distance(const EmpiricalJoint& emp, const JointTable<double>& theory,
                     unsigned support_cap);
TvResult tv_distance(const JointTable<double>& a, const JointTable<double>& b,
                     unsigned support_cap);

// --- exponent fits -------------------------------------------------------------

struct ExponentFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    double window_lo = 0, window_hi = 0;
    std::size_t points = 0;
};

// least squares of log y on log x
ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& points);

// dist[i] is the value at index first_index + i; fits indices in [lo, hi];
// nonpositive values inside the window are an error
ExponentFit fit_power_law(const std::vector<double>& dist, unsigned first_index,
                          unsigned lo, unsigned hi);

// trajectory of (n, value); fits checkpoints with n in [lo, hi], at least 5
ExponentFit fit_growth_exponent(const std::vector<std::pair<std::int64_t, double>>& trajectory,
                                std::int64_t lo, std::int64_t hi);

// D/W per checkpoint from (W, D) pairs; for alpha2 > 0 this approaches alpha2/alpha
std::vector<double> degree_weight_ratio(
    const std::vector<std::pair<std::uint64_t, std::uint32_t>>& weight_degree);

// --- single-step kernel test ----------------------------------------------------

// Law of the per-step (degree, weight) increment of a fixed vertex with the
// given degree and weight, in a graph with vertex_count vertices after
// n_before steps. The remaining mass is the no-participation outcome (0,0).
struct OutcomeLaw {
    double p01 = 0;  // (0,1): both partners already neighbours
    double p11 = 0;  // (1,1): one new neighbour
    double p21 = 0;  // (2,1): two new neighbours
    double participation() const { return p01 + p11 + p21; }
};

OutcomeLaw expected_outcome_law(const ModelParams& params, std::uint32_t degree,
                                std::uint64_t weight, std::int64_t vertex_count,
                                std::int64_t n_before);

struct KernelCell {
    std::string name;
    double expected = 0;  // probability
    std::int64_t observed = 0;
    double z = 0;
    bool merged = false;  // pooled with other low-expectation cells
};

struct KernelVertexReport {
    VertexLabel label = 0;
    std::uint32_t degree = 0;
    std::uint64_t weight = 0;
    double participation = 0;  // alpha*w/(n+1) + beta*p/V
    std::vector<KernelCell> cells;
    double chi_square = 0;
    unsigned dof = 0;
    double max_abs_z = 0;
};

struct KernelReport {
    std::int64_t trials = 0;
    double z_threshold = 4.0;
    double max_abs_z = 0;
    bool pass = false;
    std::vector<KernelCell> branch_cells;
    std::vector<KernelVertexReport> vertices;
};

// Runs independent single steps from the frozen state (stream-split RNG per
// trial) and compares outcome and branch frequencies against the exact
// one-step law; cells with expected count below 5 are pooled and flagged.
KernelReport kernel_test(const GraphState& frozen, std::int64_t trials,
                         double z_threshold = 4.0, std::uint64_t seed = 0x6b65726eULL);

}  // namespace tripa
