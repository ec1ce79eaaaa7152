#include "tripa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tripa {

EmpiricalJoint empirical_joint(const GraphState& state) {
    return EmpiricalJoint{state.occupancy(), state.step_count(), state.vertex_count()};
}

EmpiricalJoint empirical_joint(const TrajectoryRecord& record) {
    return EmpiricalJoint{record.occupancy, record.n, record.vertex_count};
}

TvResult tv_distance(const EmpiricalJoint& emp, const JointTable<double>& theory,
                     unsigned support_cap) {
    const OccupancyCaps caps = emp.counts.caps();
    if (support_cap < 1 || support_cap > theory.w_max || support_cap > caps.w_cap ||
        2 * support_cap > caps.d_cap)
        throw std::invalid_argument("tv_distance: support cap not covered by both sides");
    if (emp.vertex_count <= 0) throw std::invalid_argument("tv_distance: empty sample");

    const double v = static_cast<double>(emp.vertex_count);
    TvResult result;
    result.support_cap = support_cap;
    double emp_support_mass = 0;
    double theory_support_mass = 0;
    double l1 = 0;
    for (unsigned w = 1; w <= support_cap; ++w)
        for (unsigned d = 2; d <= 2 * w; ++d) {
            const double frac = static_cast<double>(emp.counts.at(d, w)) / v;
            const double x = theory.at(d, w);
            emp_support_mass += frac;
            theory_support_mass += x;
            l1 += std::abs(frac - x);
        }
    result.tv_support = l1 / 2;
    result.emp_tail_mass = 1.0 - emp_support_mass;
    result.theory_tail_mass = 1.0 - theory_support_mass;
    result.tv_total =
        result.tv_support + (result.emp_tail_mass + result.theory_tail_mass) / 2;
    return result;
}

TvResult tv_distance(const JointTable<double>& a, const JointTable<double>& b,
                     unsigned support_cap) {
    if (support_cap < 1 || support_cap > a.w_max || support_cap > b.w_max)
        throw std::invalid_argument("tv_distance: support cap not covered by both sides");
    TvResult result;
    result.support_cap = support_cap;
    double a_mass = 0, b_mass = 0, l1 = 0;
    for (unsigned w = 1; w <= support_cap; ++w)
        for (unsigned d = 2; d <= 2 * w; ++d) {
            a_mass += a.at(d, w);
            b_mass += b.at(d, w);
            l1 += std::abs(a.at(d, w) - b.at(d, w));
        }
    result.tv_support = l1 / 2;
    result.emp_tail_mass = 1.0 - a_mass;
    result.theory_tail_mass = 1.0 - b_mass;
    result.tv_total =
        result.tv_support + (result.emp_tail_mass + result.theory_tail_mass) / 2;
    return result;
}

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("fit needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        if (!(x > 0) || !(y > 0))
            throw std::invalid_argument("fit window contains nonpositive values");
        const double lx = std::log(x);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double n = static_cast<double>(points.size());
    const double den = n * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("degenerate fit window");
    ExponentFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = ss_tot - fit.slope * (sxy - sx * sy / n);
    fit.r_squared = ss_tot > 0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    fit.points = points.size();
    return fit;
}

ExponentFit fit_power_law(const std::vector<double>& dist, unsigned first_index,
                          unsigned lo, unsigned hi) {
    if (lo > hi) throw std::invalid_argument("empty fit window");
    std::vector<std::pair<double, double>> points;
    points.reserve(hi - lo + 1);
    for (unsigned i = lo; i <= hi; ++i) {
        if (i < first_index || i - first_index >= dist.size()) continue;
        points.emplace_back(static_cast<double>(i), dist[i - first_index]);
    }
    auto fit = fit_loglog(points);
    fit.window_lo = lo;
    fit.window_hi = hi;
    return fit;
}

ExponentFit fit_growth_exponent(
    const std::vector<std::pair<std::int64_t, double>>& trajectory, std::int64_t lo,
    std::int64_t hi) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [n, value] : trajectory)
        if (n >= lo && n <= hi) points.emplace_back(static_cast<double>(n), value);
    if (points.size() < 5)
        throw std::invalid_argument("fit window holds fewer than 5 checkpoints");
    auto fit = fit_loglog(points);
    fit.window_lo = static_cast<double>(lo);
    fit.window_hi = static_cast<double>(hi);
    return fit;
}

std::vector<double> degree_weight_ratio(
    const std::vector<std::pair<std::uint64_t, std::uint32_t>>& weight_degree) {
    std::vector<double> ratios;
    ratios.reserve(weight_degree.size());
    for (const auto& [w, d] : weight_degree)
        ratios.push_back(w == 0 ? 0.0
                                : static_cast<double>(d) / static_cast<double>(w));
    return ratios;
}

// --- kernel test ----------------------------------------------------------------

OutcomeLaw expected_outcome_law(const ModelParams& params, std::uint32_t degree,
                                std::uint64_t weight, std::int64_t vertex_count,
                                std::int64_t n_before) {
    if (vertex_count < 3 || n_before < 0)
        throw std::invalid_argument("expected_outcome_law: invalid state");
    const double p = params.pd();
    const double q = params.qd();
    const double r = params.rd();
    const double vc = static_cast<double>(vertex_count);
    const double d = static_cast<double>(degree);
    const double w = static_cast<double>(weight);
    const double total_triangle = static_cast<double>(n_before) + 1.0;
    const double pairs = vc * (vc - 1) / 2;
    const double triples = vc * (vc - 1) * (vc - 2) / 6;
    const double others = vc - 1 - d;  // old vertices not adjacent to this one

    OutcomeLaw law;
    law.p01 = (1 - p) * q * w / total_triangle +
              (1 - p) * (1 - q) * (d * (d - 1) / 2) / triples;
    law.p11 = p * r * 2 * w / (3 * total_triangle) + p * (1 - r) * d / pairs +
              (1 - p) * (1 - q) * d * others / triples;
    law.p21 = p * (1 - r) * others / pairs +
              (1 - p) * (1 - q) * (others * (others - 1) / 2) / triples;
    return law;
}

namespace {

// z-score of a binomial count; exact-zero expectation handled by the caller
double cell_z(std::int64_t observed, double prob, std::int64_t trials) {
    const double t = static_cast<double>(trials);
    const double sd = std::sqrt(t * prob * (1.0 - prob));
    if (sd == 0) return 0;
    return (static_cast<double>(observed) - t * prob) / sd;
}

// Collapses cells with 0 < expected count < 5 into one pooled cell. Exact-zero
// cells stay on their own: any observation there is an outright failure.
std::vector<KernelCell> finalize_cells(std::vector<KernelCell> cells, std::int64_t trials) {
    const double t = static_cast<double>(trials);
    KernelCell pooled{"pooled", 0.0, 0, 0.0, true};
    std::vector<KernelCell> out;
    int pooled_members = 0;
    for (auto& cell : cells) {
        if (cell.expected > 0 && cell.expected * t < 5.0) {
            pooled.expected += cell.expected;
            pooled.observed += cell.observed;
            pooled.name += ":" + cell.name;
            ++pooled_members;
            continue;
        }
        if (cell.expected == 0) {
            cell.z = cell.observed == 0 ? 0.0
                                        : std::numeric_limits<double>::infinity();
            cell.name += " (expected zero)";
        } else {
            cell.z = cell_z(cell.observed, cell.expected, trials);
        }
        out.push_back(std::move(cell));
    }
    if (pooled_members > 0) {
        pooled.z = cell_z(pooled.observed, pooled.expected, trials);
        out.push_back(std::move(pooled));
    }
    return out;
}

double chi_square_of(const std::vector<KernelCell>& cells, std::int64_t trials,
                     unsigned& dof) {
    double chi = 0;
    unsigned used = 0;
    for (const auto& cell : cells) {
        if (cell.expected <= 0) continue;
        const double e = cell.expected * static_cast<double>(trials);
        const double diff = static_cast<double>(cell.observed) - e;
        chi += diff * diff / e;
        ++used;
    }
    dof = used > 0 ? used - 1 : 0;
    return chi;
}

}  // namespace

KernelReport kernel_test(const GraphState& frozen, std::int64_t trials,
                         double z_threshold, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("kernel_test needs trials >= 1");
    const DerivedConstants constants = derive(frozen.params());
    const std::int64_t n_before = frozen.step_count();
    const std::int64_t v_count = frozen.vertex_count();

    // track every vertex of small states, else the first dozen labels
    std::vector<VertexLabel> labels;
    for (VertexLabel l = frozen.min_label(); l <= frozen.max_label() && labels.size() < 12;
         ++l)
        labels.push_back(l);

    KernelReport report;
    report.trials = trials;
    report.z_threshold = z_threshold;

    const double p = frozen.params().pd();
    const double q = frozen.params().qd();
    const double r = frozen.params().rd();
    const double branch_expected[4] = {p * r, p * (1 - r), (1 - p) * q,
                                       (1 - p) * (1 - q)};
    std::int64_t branch_observed[4] = {0, 0, 0, 0};

    // outcome cells per vertex: (0,0), (0,1), (1,1), (2,1)
    std::vector<std::array<std::int64_t, 4>> outcome_observed(
        labels.size(), std::array<std::int64_t, 4>{0, 0, 0, 0});

    GraphState scratch = frozen;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        scratch = frozen;
        scratch.rng() = Rng(seed, static_cast<std::uint64_t>(trial));
        const StepOutcome outcome = scratch.step();
        ++branch_observed[static_cast<int>(outcome.branch)];
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const VertexLabel label = labels[i];
            const auto dd = static_cast<std::int64_t>(scratch.degree(label)) -
                            static_cast<std::int64_t>(frozen.degree(label));
            const auto dw = static_cast<std::int64_t>(scratch.weight(label)) -
                            static_cast<std::int64_t>(frozen.weight(label));
            int cell;
            if (dw == 0 && dd == 0)
                cell = 0;
            else if (dw == 1 && dd == 0)
                cell = 1;
            else if (dw == 1 && dd == 1)
                cell = 2;
            else if (dw == 1 && dd == 2)
                cell = 3;
            else
                throw std::logic_error("impossible one-step increment observed");
            ++outcome_observed[i][cell];
        }
    }

    {
        std::vector<KernelCell> cells;
        for (int b = 0; b < 4; ++b)
            cells.push_back(KernelCell{to_string(static_cast<StepBranch>(b)),
                                       branch_expected[b], branch_observed[b], 0, false});
        report.branch_cells = finalize_cells(std::move(cells), trials);
    }

    for (std::size_t i = 0; i < labels.size(); ++i) {
        const VertexLabel label = labels[i];
        KernelVertexReport vr;
        vr.label = label;
        vr.degree = frozen.degree(label);
        vr.weight = frozen.weight(label);
        const OutcomeLaw law =
            expected_outcome_law(frozen.params(), vr.degree, vr.weight, v_count, n_before);
        vr.participation = participation_probability(
            constants, vr.weight, static_cast<std::uint64_t>(n_before) + 1,
            static_cast<std::uint64_t>(v_count));
        if (std::abs(vr.participation - law.participation()) > 1e-9)
            throw std::logic_error("participation formula disagrees with the one-step law");

        std::vector<KernelCell> cells;
        cells.push_back(
            KernelCell{"(0,0)", 1.0 - law.participation(), outcome_observed[i][0], 0, false});
        cells.push_back(KernelCell{"(0,1)", law.p01, outcome_observed[i][1], 0, false});
        cells.push_back(KernelCell{"(1,1)", law.p11, outcome_observed[i][2], 0, false});
        cells.push_back(KernelCell{"(2,1)", law.p21, outcome_observed[i][3], 0, false});
        vr.cells = finalize_cells(std::move(cells), trials);
        vr.chi_square = chi_square_of(vr.cells, trials, vr.dof);
        for (const auto& cell : vr.cells)
            vr.max_abs_z = std::max(vr.max_abs_z, std::abs(cell.z));
        report.vertices.push_back(std::move(vr));
    }

    report.max_abs_z = 0;
    for (const auto& cell : report.branch_cells)
        report.max_abs_z = std::max(report.max_abs_z, std::abs(cell.z));
    for (const auto& vr : report.vertices)
        report.max_abs_z = std::max(report.max_abs_z, vr.max_abs_z);
    report.pass = report.max_abs_z <= z_threshold;
    return report;
}

}  // namespace tripa
