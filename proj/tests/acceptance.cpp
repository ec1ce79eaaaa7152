// Acceptance suite: one test case per criterion, each printing a pass/fail
// line. Statistical criteria run 10 seeds of 1e6 steps; everything is
// deterministic (fixed seeds, fixed streams).

#include <doctest.h>

#include "tripa/analysis.hpp"
#include "tripa/experiment.hpp"
#include "tripa/rng.hpp"
#include "tripa/theory.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

using namespace tripa;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, const char* name, bool pass) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, name);
    std::fflush(stdout);
    CHECK_MESSAGE(pass, "criterion ", criterion, ": ", name);
}

ModelParams params(const char* p, const char* q, const char* r) {
    return ModelParams::from_strings(p, q, r);
}

const std::vector<ModelParams>& rational_parameter_sets() {
    static const std::vector<ModelParams> sets{
        params("1", "0", "1"),        // boundary: alpha1 = 0, beta = 0
        params("1/2", "1/2", "1/2"),  // interior
        params("2/5", "1/3", "3/4"),  // interior, large beta
    };
    return sets;
}

double mean_of(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

// ten 1e6-step replications with vertex 0 tracked
struct SimSet {
    std::vector<std::vector<TrajectoryRecord>> records;
    std::vector<EmpiricalJoint> finals;
    double wall_seconds = 0;
};

SimSet build_sim_set(const ModelParams& mp) {
    const auto t0 = std::chrono::steady_clock::now();
    SimSet set;
    const auto checkpoints = geometric_checkpoints(1'000'000);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GraphState state = init(mp, seed, 0, OccupancyCaps{64, 128});
        set.records.push_back(run(state, 1'000'000, checkpoints, {0}));
        set.finals.push_back(empirical_joint(state));
    }
    set.wall_seconds = seconds_since(t0);
    return set;
}

const SimSet& fixture_boundary() {  // p=1, q=0, r=1
    static const SimSet set = build_sim_set(params("1", "0", "1"));
    return set;
}

const SimSet& fixture_interior() {  // p=q=r=1/2
    static const SimSet set = build_sim_set(params("1/2", "1/2", "1/2"));
    return set;
}

struct SlopeSummary {
    double w0, d0, max_w, max_d, final_ratio;
};

SlopeSummary slope_summary(const SimSet& set) {
    std::vector<double> w0s, d0s, maxws, maxds, ratios;
    for (const auto& records : set.records) {
        std::vector<std::pair<std::int64_t, double>> w0, d0, mw, md;
        for (const auto& rec : records) {
            w0.emplace_back(rec.n, static_cast<double>(rec.tracked[0].first));
            d0.emplace_back(rec.n, static_cast<double>(rec.tracked[0].second));
            mw.emplace_back(rec.n, static_cast<double>(rec.max_weight));
            md.emplace_back(rec.n, static_cast<double>(rec.max_degree));
        }
        w0s.push_back(fit_growth_exponent(w0, 10'000, 1'000'000).slope);
        d0s.push_back(fit_growth_exponent(d0, 10'000, 1'000'000).slope);
        maxws.push_back(fit_growth_exponent(mw, 10'000, 1'000'000).slope);
        maxds.push_back(fit_growth_exponent(md, 10'000, 1'000'000).slope);
        ratios.push_back(md.back().second / mw.back().second);
    }
    return {mean_of(w0s), mean_of(d0s), mean_of(maxws), mean_of(maxds), mean_of(ratios)};
}

}  // namespace

TEST_CASE("criterion 1: explicit formula equals the recursion exactly, w <= 12") {
    const auto t0 = std::chrono::steady_clock::now();
    bool equal = true;
    for (const auto& mp : rational_parameter_sets()) {
        const auto constants = derive_exact(mp);
        const auto joint = joint_recursion(constants, 12);
        for (unsigned w = 1; w <= 12 && equal; ++w)
            for (unsigned d = 2; d <= 2 * w; ++d)
                if (joint_explicit_exact(constants, d, w) != joint.at(d, w)) {
                    equal = false;
                    break;
                }
    }
    const double elapsed = seconds_since(t0);
    std::printf("    oracle equivalence on 3 parameter sets in %.2f s\n", elapsed);
    report(1, "oracle equivalence (explicit formula vs recursion, w <= 12, < 10 s)",
           equal && elapsed < 10.0);
}

TEST_CASE("criterion 2: construction identity P(S_W=d, W=w) = x_{d,w}, w <= 64") {
    const auto t0 = std::chrono::steady_clock::now();
    bool equal = true;
    for (const auto& mp : rational_parameter_sets()) {
        const auto constants = derive_exact(mp);
        const auto dist = weight_dist(constants, 64);
        const auto joint = joint_recursion(constants, 64);
        for (unsigned w = 1; w <= 64 && equal; ++w) {
            const auto pmf = sum_law_pmf(constants, w);
            for (unsigned d = 2; d <= 2 * w; ++d)
                if (pmf[d - 2] * dist.at(w) != joint.at(d, w)) {
                    equal = false;
                    break;
                }
        }
    }
    const double elapsed = seconds_since(t0);
    std::printf("    construction identity on 3 parameter sets in %.2f s\n", elapsed);
    report(2, "construction identity (sum law x weight marginal, exact, w <= 64, < 30 s)",
           equal && elapsed < 30.0);
}

TEST_CASE("criterion 3: marginal consistency within 1e-12 up to w = 200") {
    double worst = 0;
    for (const auto& mp : rational_parameter_sets()) {
        const auto constants = derive(mp);
        const auto dist = weight_dist(constants, 200);
        const auto joint = joint_recursion(constants, 200);
        for (unsigned w = 1; w <= 200; ++w)
            worst = std::max(worst, std::abs(joint.row_sum(w) - dist.at(w)));
    }
    std::printf("    worst |row sum - x_w| = %.3e\n", worst);
    report(3, "marginal consistency (|sum_d x_dw - x_w| <= 1e-12, w <= 200)", worst <= 1e-12);
}

TEST_CASE("criterion 4: weight power-law tail slope within 0.01") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto constants = derive(params("1", "0", "1"));
    const auto dist = weight_dist(constants, 10'000);
    const auto fit = fit_power_law(dist.values, 1, 1'000, 10'000);
    const double elapsed = seconds_since(t0);
    const double target = -(1.0 + 1.0 / constants.alpha);
    std::printf("    slope %.5f vs %.5f in %.2f s\n", fit.slope, target, elapsed);
    report(4, "power-law tail (slope of x_w on [1e3,1e4] within 0.01 of -2.5, < 5 s)",
           std::abs(fit.slope - target) <= 0.01 && elapsed < 5.0);
}

TEST_CASE("criterion 5: gaussian local limit error decays in w") {
    const auto constants = derive(params("3/4", "1", "1"));  // alpha1, alpha2 > 0
    const std::vector<unsigned> targets{100, 400, 1600};
    const auto rows = joint_rows(constants, targets);
    const auto dist = weight_dist(constants, 1600);
    double sup[3];
    for (int i = 0; i < 3; ++i) {
        const unsigned w = targets[i];
        const double x_w = dist.at(w);
        double m = 0;
        for (unsigned d = 2; d <= 2 * w; ++d)
            m = std::max(m, std::abs(rows[i][d - 2] - gaussian_joint(constants, d, w, x_w)));
        sup[i] = m * std::sqrt(static_cast<double>(w)) / x_w;
    }
    std::printf("    scaled sup deviation: %.4f (w=100), %.4f (w=400), %.4f (w=1600)\n",
                sup[0], sup[1], sup[2]);
    report(5, "gaussian local limit (scaled sup error non-increasing over w=100,400,1600)",
           sup[1] <= 1.05 * sup[0] && sup[2] <= 1.05 * sup[1]);
}

TEST_CASE("criterion 6: degree-marginal tail slope and prefactor") {
    const auto constants = derive(params("3/4", "1", "1"));  // alpha1, alpha2 > 0
    const auto marginal = degree_marginal(constants, 200, 1e-8);
    const auto fit = fit_power_law(marginal.values, 2, 50, 200);
    const double target = -(1.0 + 1.0 / constants.alpha);
    const double ratio = marginal.at(200) / degree_tail_asymptote(constants, 200);
    std::printf("    slope %.4f vs %.4f; prefactor ratio at d=200: %.4f\n", fit.slope,
                target, ratio);
    report(6,
           "degree-marginal tail (slope within 0.05, prefactor within 10% at d=200)",
           std::abs(fit.slope - target) <= 0.05 && std::abs(ratio - 1.0) <= 0.10);
}

TEST_CASE("criterion 7: simulated joint converges to the limit in TV") {
    const SimSet& set = fixture_boundary();
    const auto constants = derive(params("1", "0", "1"));
    const auto theory = joint_recursion(constants, 64);
    std::vector<double> tvs, x21s;
    for (const auto& emp : set.finals) {
        tvs.push_back(tv_distance(emp, theory, 32).tv_support);
        x21s.push_back(static_cast<double>(emp.counts.at(2, 1)) /
                       static_cast<double>(emp.vertex_count));
    }
    const double tv_mean = mean_of(tvs);
    const double x21_mean = mean_of(x21s);
    std::printf("    mean TV (w <= 32) = %.5f; mean X[n,2,1]/V_n = %.5f (sim %.1f s)\n",
                tv_mean, x21_mean, set.wall_seconds);
    report(7, "simulation convergence (mean TV <= 0.01 and X[n,2,1]/V_n within 0.01 of 0.6)",
           tv_mean <= 0.01 && std::abs(x21_mean - 0.6) <= 0.01);
}

TEST_CASE("criterion 8: one-step kernel chi-square at 4 sigma") {
    const std::int64_t trials = 1'000'000;
    bool all_pass = true;
    int case_index = 0;
    for (const auto& mp : {params("1", "0", "1"), params("1/2", "1/2", "1/2")}) {
        for (const bool six : {false, true}) {
            const GraphState frozen =
                six ? make_six_vertex_state(mp, 42) : init(mp, 42);
            const KernelReport rep =
                kernel_test(frozen, trials, 4.0, 1000 + static_cast<std::uint64_t>(case_index));
            std::printf("    %s state, p=%s: max |z| = %.2f -> %s\n",
                        six ? "six-vertex" : "initial", format_rational(mp.p).c_str(),
                        rep.max_abs_z, rep.pass ? "ok" : "FAIL");
            all_pass = all_pass && rep.pass;
            ++case_index;
        }
    }
    report(8, "kernel correctness (no cell beyond 4 sigma, 1e6 trials, 4 states)", all_pass);
}

TEST_CASE("criterion 9: growth laws for weights, degrees and maxima") {
    const SlopeSummary boundary = slope_summary(fixture_boundary());
    const double alpha_a = 2.0 / 3;
    std::printf("    p=1,r=1 slopes: W0 %.4f D0 %.4f maxW %.4f maxD %.4f ratio %.4f\n",
                boundary.w0, boundary.d0, boundary.max_w, boundary.max_d,
                boundary.final_ratio);
    const bool pass_a = std::abs(boundary.w0 - alpha_a) <= 0.05 &&
                        std::abs(boundary.d0 - alpha_a) <= 0.05 &&
                        std::abs(boundary.max_w - alpha_a) <= 0.05 &&
                        std::abs(boundary.max_d - alpha_a) <= 0.05 &&
                        std::abs(boundary.final_ratio - 1.0) <= 0.1;

    const SlopeSummary interior = slope_summary(fixture_interior());
    const double alpha_b = 5.0 / 12;
    std::printf("    p=q=r=1/2 slopes: W0 %.4f D0 %.4f maxW %.4f maxD %.4f ratio %.4f\n",
                interior.w0, interior.d0, interior.max_w, interior.max_d,
                interior.final_ratio);
    const bool pass_b = std::abs(interior.w0 - alpha_b) <= 0.07 &&
                        std::abs(interior.d0 - alpha_b) <= 0.07 &&
                        std::abs(interior.max_w - alpha_b) <= 0.07 &&
                        std::abs(interior.max_d - alpha_b) <= 0.07 &&
                        std::abs(interior.final_ratio - 0.4) <= 0.1;
    report(9, "growth laws (slopes near alpha; max degree/weight ratio near alpha2/alpha)",
           pass_a && pass_b);
}

TEST_CASE("criterion 10: structural invariants under random parameters") {
    std::vector<ModelParams> sets{params("1", "0", "1"), params("1", "1", "0"),
                                  params("3/10", "1", "1"), params("3/10", "0", "0")};
    Rng rng(0xfacade, 0);
    while (sets.size() < 20) {
        const Rational p(1 + rng.below(20), 20);
        const Rational q(rng.below(21), 20);
        const Rational r(rng.below(21), 20);
        sets.push_back(ModelParams{p, q, r});
    }
    bool ok = true;
    std::string first_failure;
    for (std::size_t i = 0; i < sets.size() && ok; ++i) {
        try {
            GraphState state(sets[i], 9000 + i, 0, OccupancyCaps{32, 64});
            run(state, 10'000, {1, 10, 100, 1'000, 10'000}, {0, 7},
                ValidateMode::kCheckpoints);
        } catch (const std::exception& error) {
            ok = false;
            first_failure = error.what();
        }
    }
    if (!ok) std::printf("    first violation: %s\n", first_failure.c_str());
    report(10, "structural invariants fuzz (20 parameter sets x 1e4 steps, zero violations)",
           ok);
}
