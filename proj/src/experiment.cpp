#include "tripa/experiment.hpp"

#include "tripa/io.hpp"
#include "tripa/theory.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace tripa {

namespace fs = std::filesystem;
using nlohmann::json;

// --- config -------------------------------------------------------------------

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, T (*convert)(const std::string&)) {
    std::vector<T> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(convert(item));
    }
    return out;
}

std::int64_t to_int(const std::string& s) { return parse_int(s); }
std::uint64_t to_uint(const std::string& s) {
    const std::int64_t v = parse_int(s);
    if (v < 0) throw std::invalid_argument("expected a nonnegative integer, got " + s);
    return static_cast<std::uint64_t>(v);
}

bool to_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::string join_list(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

std::string join_list(const std::vector<std::uint64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "p") config.p = value;
    else if (key == "q") config.q = value;
    else if (key == "r") config.r = value;
    else if (key == "steps") config.steps = parse_int(value);
    else if (key == "seeds") config.seeds = parse_list<std::uint64_t>(value, +[](const std::string& s) { return to_uint(s); });
    else if (key == "jobs") config.jobs = static_cast<unsigned>(to_uint(value));
    else if (key == "w_max") config.w_max = static_cast<unsigned>(to_uint(value));
    else if (key == "d_max") config.d_max = static_cast<unsigned>(to_uint(value));
    else if (key == "w_cap") config.w_cap = static_cast<unsigned>(to_uint(value));
    else if (key == "d_cap") config.d_cap = static_cast<unsigned>(to_uint(value));
    else if (key == "track") config.track = parse_list<VertexLabel>(value, +[](const std::string& s) { return to_int(s); });
    else if (key == "out") config.out = value;
    else if (key == "exact") config.exact = to_bool(value);
    else if (key == "trials") config.trials = parse_int(value);
    else if (key == "support_cap") config.support_cap = static_cast<unsigned>(to_uint(value));
    else if (key == "window_lo") config.window_lo = parse_int(value);
    else if (key == "window_hi") config.window_hi = parse_int(value);
    else if (key == "checkpoints") config.checkpoints = parse_list<std::int64_t>(value, +[](const std::string& s) { return to_int(s); });
    else if (key == "kernel_state") config.kernel_state = value;
    else if (key == "tol_tv") config.tol_tv = parse_double(value);
    else if (key == "tol_slope") config.tol_slope = parse_double(value);
    else if (key == "tol_ratio") config.tol_ratio = parse_double(value);
    else if (key == "tol_x21") config.tol_x21 = parse_double(value);
    else if (key == "tail_tolerance") config.tail_tolerance = parse_double(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const fs::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto from = s.find_first_not_of(" \t\r");
            const auto to = s.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string{} : s.substr(from, to - from + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto sep = line.find('=');
        std::string key, value;
        if (sep != std::string::npos) {
            key = trim(line.substr(0, sep));
            value = trim(line.substr(sep + 1));
        } else {
            sep = line.find_first_of(" \t");
            if (sep == std::string::npos)
                throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                            ": expected 'key = value'");
            key = trim(line.substr(0, sep));
            value = trim(line.substr(sep + 1));
        }
        try {
            apply_config_entry(base, key, value);
        } catch (const std::invalid_argument& error) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": " + error.what());
        }
    }
    return base;
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps) {
    std::vector<std::int64_t> points;
    if (steps < 1) return points;
    for (int k = 0;; ++k) {
        const auto value =
            static_cast<std::int64_t>(std::llround(std::pow(10.0, 3.0 + k / 8.0)));
        if (value > steps) break;
        if (points.empty() || value > points.back()) points.push_back(value);
    }
    if (points.empty() || points.back() != steps) points.push_back(steps);
    return points;
}

std::vector<std::int64_t> ExperimentConfig::resolved_checkpoints() const {
    return checkpoints.empty() ? geometric_checkpoints(steps) : checkpoints;
}

std::pair<std::int64_t, std::int64_t> ExperimentConfig::resolved_window() const {
    const std::int64_t lo = window_lo > 0 ? window_lo : std::max<std::int64_t>(1, steps / 100);
    const std::int64_t hi = window_hi > 0 ? window_hi : steps;
    return {lo, hi};
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream text;
    text << "p = " << p << "\n"
         << "q = " << q << "\n"
         << "r = " << r << "\n"
         << "steps = " << steps << "\n"
         << "seeds = " << join_list(seeds) << "\n"
         << "jobs = " << jobs << "\n"
         << "w_max = " << w_max << "\n"
         << "d_max = " << d_max << "\n"
         << "w_cap = " << w_cap << "\n"
         << "d_cap = " << d_cap << "\n"
         << "track = " << join_list(track) << "\n"
         << "out = " << out << "\n"
         << "exact = " << (exact ? "true" : "false") << "\n"
         << "trials = " << trials << "\n"
         << "support_cap = " << support_cap << "\n"
         << "window_lo = " << window_lo << "\n"
         << "window_hi = " << window_hi << "\n"
         << "checkpoints = " << join_list(checkpoints) << "\n"
         << "kernel_state = " << kernel_state << "\n"
         << "tol_tv = " << format_double(tol_tv) << "\n"
         << "tol_slope = " << format_double(tol_slope) << "\n"
         << "tol_ratio = " << format_double(tol_ratio) << "\n"
         << "tol_x21 = " << format_double(tol_x21) << "\n"
         << "tail_tolerance = " << format_double(tail_tolerance) << "\n";
    return text.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical_text()); }

void ExperimentConfig::validate() const {
    model_params();  // throws on bad p,q,r
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seeds must be nonempty");
    if (w_max < 1) throw std::invalid_argument("w_max must be >= 1");
    if (d_max < 2) throw std::invalid_argument("d_max must be >= 2");
    if (w_cap < 1 || d_cap < 2) throw std::invalid_argument("occupancy caps too small");
    if (support_cap < 1) throw std::invalid_argument("support_cap must be >= 1");
    const auto cps = resolved_checkpoints();
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] < 1 || cps[i] > steps)
            throw std::invalid_argument("checkpoints must lie in [1, steps]");
        if (i > 0 && cps[i] <= cps[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    }
    const auto [lo, hi] = resolved_window();
    if (lo > hi) throw std::invalid_argument("fit window is empty");
}

// --- shared output helpers ------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> csv_preamble(
    const ExperimentConfig& config) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("tool", std::string("tripa ") + kVersion);
    meta.emplace_back("rng", Rng::algorithm);
    meta.emplace_back("config_hash", hash_hex(config.hash()));
    std::istringstream lines(config.canonical_text());
    std::string line;
    while (std::getline(lines, line)) {
        const auto sep = line.find(" = ");
        meta.emplace_back("cfg." + line.substr(0, sep), line.substr(sep + 3));
    }
    return meta;
}

json config_json(const ExperimentConfig& config) {
    json obj;
    std::istringstream lines(config.canonical_text());
    std::string line;
    while (std::getline(lines, line)) {
        const auto sep = line.find(" = ");
        obj[line.substr(0, sep)] = line.substr(sep + 3);
    }
    return obj;
}

json base_meta(const ExperimentConfig& config) {
    return json{{"schema_version", 1},
                {"tool", std::string("tripa ") + kVersion},
                {"rng", Rng::algorithm},
                {"config", config_json(config)},
                {"config_hash", hash_hex(config.hash())}};
}

void must_create_directories(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
}

struct Mean {
    double mean = 0, stddev = 0;
    std::vector<double> values;
};

Mean aggregate(std::vector<double> values) {
    Mean m;
    m.values = std::move(values);
    if (m.values.empty()) return m;
    m.mean = std::accumulate(m.values.begin(), m.values.end(), 0.0) /
             static_cast<double>(m.values.size());
    double ss = 0;
    for (const double v : m.values) ss += (v - m.mean) * (v - m.mean);
    m.stddev = m.values.size() > 1
                   ? std::sqrt(ss / static_cast<double>(m.values.size() - 1))
                   : 0.0;
    return m;
}

json mean_json(const Mean& m) {
    return json{{"mean", m.mean}, {"stddev", m.stddev}, {"per_seed", m.values}};
}

}  // namespace

// --- theory -----------------------------------------------------------------------

int cmd_theory(const ExperimentConfig& config) {
    config.validate();
    const ModelParams params = config.model_params();
    const RationalConstants exact_constants = derive_exact(params);
    const DerivedConstants constants = derive(params);
    const fs::path dir = fs::path(config.out) / "theory";
    must_create_directories(dir);
    const auto preamble = csv_preamble(config);

    Csv weight_csv;
    weight_csv.metadata = preamble;
    weight_csv.metadata.emplace_back("w_max", std::to_string(config.w_max));
    weight_csv.header = {"w", "value"};
    Csv joint_csv;
    joint_csv.metadata = weight_csv.metadata;
    joint_csv.header = {"w", "d", "value"};

    if (config.exact) {
        const auto dist = weight_dist<Rational>(exact_constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            weight_csv.rows.push_back({std::to_string(w), format_rational(dist.at(w))});
        const auto joint = joint_recursion<Rational>(exact_constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            for (unsigned d = 2; d <= 2 * w; ++d)
                joint_csv.rows.push_back(
                    {std::to_string(w), std::to_string(d), format_rational(joint.at(d, w))});
    } else if (config.w_max <= 256) {
        // exact recursion, rounded per entry: the written doubles are the
        // nearest representables of the true limits
        const auto dist = weight_dist<Rational>(exact_constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            weight_csv.rows.push_back(
                {std::to_string(w), format_double(to_double(dist.at(w)))});
        const auto joint = joint_recursion<Rational>(exact_constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            for (unsigned d = 2; d <= 2 * w; ++d)
                joint_csv.rows.push_back({std::to_string(w), std::to_string(d),
                                          format_double(to_double(joint.at(d, w)))});
    } else {
        const auto dist = weight_dist<double>(constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            weight_csv.rows.push_back({std::to_string(w), format_double(dist.at(w))});
        const auto joint = joint_recursion<double>(constants, config.w_max);
        for (unsigned w = 1; w <= config.w_max; ++w)
            for (unsigned d = 2; d <= 2 * w; ++d)
                joint_csv.rows.push_back(
                    {std::to_string(w), std::to_string(d), format_double(joint.at(d, w))});
    }
    write_csv(dir / "weight.csv", weight_csv);
    write_csv(dir / "joint.csv", joint_csv);

    json meta = base_meta(config);
    meta["params"] = {{"p", format_rational(params.p)},
                      {"q", format_rational(params.q)},
                      {"r", format_rational(params.r)}};
    meta["constants"] = {{"alpha1", constants.alpha1},
                         {"alpha2", constants.alpha2},
                         {"alpha", constants.alpha},
                         {"beta", constants.beta},
                         {"exact", {{"alpha1", format_rational(exact_constants.alpha1)},
                                    {"alpha2", format_rational(exact_constants.alpha2)},
                                    {"alpha", format_rational(exact_constants.alpha)},
                                    {"beta", format_rational(exact_constants.beta)}}}};
    meta["degenerate_alpha"] = constants.degenerate_alpha;

    const auto dist = weight_dist<double>(constants, config.w_max);
    if (constants.alpha > 0) {
        Csv asym_csv;
        asym_csv.metadata = weight_csv.metadata;
        asym_csv.header = {"w", "value", "ratio_to_recursion"};
        for (unsigned w = 1; w <= config.w_max; ++w) {
            const double a = weight_tail_asymptote(constants, w);
            asym_csv.rows.push_back({std::to_string(w), format_double(a),
                                     format_double(dist.at(w) / a)});
        }
        write_csv(dir / "asymptote.csv", asym_csv);
    } else {
        meta["asymptote_skipped"] = "alpha = 0";
    }

    if (constants.alpha1 > 0 && constants.alpha2 > 0) {
        Csv gauss_csv;
        gauss_csv.metadata = weight_csv.metadata;
        gauss_csv.header = {"w", "d", "value"};
        for (unsigned w = 1; w <= config.w_max; ++w)
            for (unsigned d = 2; d <= 2 * w; ++d)
                gauss_csv.rows.push_back(
                    {std::to_string(w), std::to_string(d),
                     format_double(gaussian_joint(constants, d, w, dist.at(w)))});
        write_csv(dir / "gaussian.csv", gauss_csv);
    } else {
        meta["gaussian_skipped"] = "needs alpha1 > 0 and alpha2 > 0";
    }

    const DegreeMarginal marginal =
        degree_marginal(constants, config.d_max, config.tail_tolerance);
    Csv deg_csv;
    deg_csv.metadata = weight_csv.metadata;
    deg_csv.metadata.emplace_back("w_cutoff", std::to_string(marginal.w_cutoff));
    deg_csv.metadata.emplace_back("truncation_bound",
                                  format_double(marginal.truncation_bound));
    const bool with_asym = constants.alpha > 0 && constants.alpha2 > 0;
    deg_csv.header = with_asym ? std::vector<std::string>{"d", "value", "asymptote"}
                               : std::vector<std::string>{"d", "value"};
    for (unsigned d = 2; d <= config.d_max; ++d) {
        std::vector<std::string> row{std::to_string(d), format_double(marginal.at(d))};
        if (with_asym) row.push_back(format_double(degree_tail_asymptote(constants, d)));
        deg_csv.rows.push_back(std::move(row));
    }
    write_csv(dir / "degree_marginal.csv", deg_csv);

    meta["degree_marginal"] = {{"d_max", config.d_max},
                               {"w_cutoff", marginal.w_cutoff},
                               {"tail_tolerance", config.tail_tolerance},
                               {"truncation_bound", marginal.truncation_bound}};
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    return 0;
}

// --- simulate -----------------------------------------------------------------------

namespace {

void simulate_one_seed(const ExperimentConfig& config, const ModelParams& params,
                       const std::vector<std::int64_t>& checkpoints, std::uint64_t seed,
                       const fs::path& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    GraphState state = init(params, seed, 0, config.occupancy_caps());
    const auto records = run(state, config.steps, checkpoints, config.track);
    const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
    const std::string tag = "_seed" + std::to_string(seed);

    Csv run_csv;
    run_csv.metadata = csv_preamble(config);
    run_csv.metadata.emplace_back("seed", std::to_string(seed));
    run_csv.header = {"n", "V", "max_w", "max_d"};
    for (const VertexLabel label : config.track) {
        run_csv.header.push_back("W_" + std::to_string(label));
        run_csv.header.push_back("D_" + std::to_string(label));
    }
    for (const auto& rec : records) {
        std::vector<std::string> row{std::to_string(rec.n), std::to_string(rec.vertex_count),
                                     std::to_string(rec.max_weight),
                                     std::to_string(rec.max_degree)};
        for (const auto& [w, d] : rec.tracked) {
            row.push_back(std::to_string(w));
            row.push_back(std::to_string(d));
        }
        run_csv.rows.push_back(std::move(row));
    }
    write_csv(dir / ("run" + tag + ".csv"), run_csv);

    Csv occ_csv;
    occ_csv.metadata = csv_preamble(config);
    occ_csv.metadata.emplace_back("seed", std::to_string(seed));
    occ_csv.metadata.emplace_back("n", std::to_string(state.step_count()));
    occ_csv.metadata.emplace_back("V", std::to_string(state.vertex_count()));
    occ_csv.metadata.emplace_back("overflow", std::to_string(state.occupancy().overflow()));
    occ_csv.metadata.emplace_back("w_cap", std::to_string(config.w_cap));
    occ_csv.metadata.emplace_back("d_cap", std::to_string(config.d_cap));
    occ_csv.header = {"w", "d", "count"};
    for (unsigned w = 1; w <= config.w_cap; ++w)
        for (unsigned d = 2; d <= config.d_cap && d <= 2 * w; ++d)
            if (const auto count = state.occupancy().at(d, w); count != 0)
                occ_csv.rows.push_back(
                    {std::to_string(w), std::to_string(d), std::to_string(count)});
    write_csv(dir / ("occupancy" + tag + ".csv"), occ_csv);

    write_file(dir / ("snapshot" + tag + ".json"), state.to_snapshot_json() + "\n");

    json meta = base_meta(config);
    meta["seed"] = seed;
    meta["steps"] = config.steps;
    meta["wall_time_ms"] = elapsed_ms;
    meta["final"] = {{"V", state.vertex_count()},
                     {"max_w", state.max_weight()},
                     {"max_d", state.max_degree()},
                     {"edges", state.edge_count()},
                     {"triangles", state.triangle_count()},
                     {"overflow", state.occupancy().overflow()}};
    write_file(dir / ("meta" + tag + ".json"), meta.dump(2) + "\n");
}

}  // namespace

int cmd_simulate(const ExperimentConfig& config) {
    config.validate();
    const ModelParams params = config.model_params();
    const fs::path dir = fs::path(config.out) / "sim";
    must_create_directories(dir);
    const auto checkpoints = config.resolved_checkpoints();

    const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    const unsigned jobs =
        config.jobs ? config.jobs
                    : std::min<unsigned>(hardware,
                                         static_cast<unsigned>(config.seeds.size()));

    std::vector<std::exception_ptr> errors(config.seeds.size());
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (std::size_t i; (i = cursor.fetch_add(1)) < config.seeds.size();) {
            try {
                simulate_one_seed(config, params, checkpoints, config.seeds[i], dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);
    return 0;
}

// --- compare ------------------------------------------------------------------------

namespace {

struct SeedData {
    std::uint64_t seed = 0;
    EmpiricalJoint joint{OccupancyCounts{}, 0, 0};
    // trajectories keyed like the CSV columns
    std::vector<std::int64_t> ns;
    std::vector<double> max_w, max_d;
    std::vector<std::vector<double>> tracked_w, tracked_d;  // per tracked label
};

double parse_value(const std::string& text) {
    // theory CSVs may carry rationals in exact mode
    return text.find('/') == std::string::npos ? parse_double(text)
                                               : to_double(parse_rational(text));
}

JointTable<double> load_theory_joint(const fs::path& path) {
    const Csv csv = read_csv(path);
    unsigned w_max = 0;
    if (const auto text = csv.metadata_value("w_max"); !text.empty())
        w_max = static_cast<unsigned>(parse_int(text));
    const auto w_col = csv.column("w");
    const auto d_col = csv.column("d");
    const auto v_col = csv.column("value");
    if (w_max == 0)
        for (const auto& row : csv.rows)
            w_max = std::max<unsigned>(w_max,
                                       static_cast<unsigned>(parse_int(row[w_col])));
    JointTable<double> table(w_max);
    for (const auto& row : csv.rows)
        table.cell(static_cast<unsigned>(parse_int(row[d_col])),
                   static_cast<unsigned>(parse_int(row[w_col]))) =
            parse_value(row[v_col]);
    return table;
}

SeedData load_seed_data(const ExperimentConfig& config, std::uint64_t seed,
                        const fs::path& dir) {
    SeedData data;
    data.seed = seed;
    const std::string tag = "_seed" + std::to_string(seed);

    const Csv occ = read_csv(dir / ("occupancy" + tag + ".csv"));
    const OccupancyCaps caps{
        static_cast<unsigned>(parse_int(occ.metadata_value("w_cap"))),
        static_cast<unsigned>(parse_int(occ.metadata_value("d_cap")))};
    OccupancyCounts counts(caps);
    const auto w_col = occ.column("w");
    const auto d_col = occ.column("d");
    const auto c_col = occ.column("count");
    for (const auto& row : occ.rows)
        counts.add_count(static_cast<unsigned>(parse_int(row[d_col])),
                         static_cast<std::uint64_t>(parse_int(row[w_col])),
                         parse_int(row[c_col]));
    counts.add_overflow(parse_int(occ.metadata_value("overflow")));
    data.joint = EmpiricalJoint{std::move(counts), parse_int(occ.metadata_value("n")),
                                parse_int(occ.metadata_value("V"))};

    const Csv traj = read_csv(dir / ("run" + tag + ".csv"));
    const auto n_col = traj.column("n");
    const auto mw_col = traj.column("max_w");
    const auto md_col = traj.column("max_d");
    std::vector<std::size_t> w_cols, d_cols;
    for (const VertexLabel label : config.track) {
        w_cols.push_back(traj.column("W_" + std::to_string(label)));
        d_cols.push_back(traj.column("D_" + std::to_string(label)));
    }
    data.tracked_w.resize(config.track.size());
    data.tracked_d.resize(config.track.size());
    for (const auto& row : traj.rows) {
        data.ns.push_back(parse_int(row[n_col]));
        data.max_w.push_back(parse_double(row[mw_col]));
        data.max_d.push_back(parse_double(row[md_col]));
        for (std::size_t t = 0; t < config.track.size(); ++t) {
            data.tracked_w[t].push_back(parse_double(row[w_cols[t]]));
            data.tracked_d[t].push_back(parse_double(row[d_cols[t]]));
        }
    }
    return data;
}

// slope fit over the window, or nullopt when values vanish inside it
std::optional<double> window_slope(const std::vector<std::int64_t>& ns,
                                   const std::vector<double>& values, std::int64_t lo,
                                   std::int64_t hi) {
    std::vector<std::pair<std::int64_t, double>> traj;
    for (std::size_t i = 0; i < ns.size(); ++i) traj.emplace_back(ns[i], values[i]);
    try {
        return fit_growth_exponent(traj, lo, hi).slope;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

json check_json(const std::string& name, const Mean& m, double target, double tol,
                bool skipped = false, const std::string& note = {}) {
    json obj{{"name", name},       {"target", target}, {"tolerance", tol},
             {"skipped", skipped}, {"pass", false},    {"note", note}};
    if (!skipped) {
        obj.update(mean_json(m));
        obj["pass"] = std::abs(m.mean - target) <= tol;
    }
    return obj;
}

}  // namespace

int cmd_compare(const ExperimentConfig& config) {
    config.validate();
    const fs::path out_dir(config.out);
    const fs::path theory_dir = out_dir / "theory";
    const fs::path sim_dir = out_dir / "sim";

    std::vector<fs::path> required{theory_dir / "joint.csv"};
    for (const std::uint64_t seed : config.seeds) {
        const std::string tag = "_seed" + std::to_string(seed);
        required.push_back(sim_dir / ("run" + tag + ".csv"));
        required.push_back(sim_dir / ("occupancy" + tag + ".csv"));
    }
    std::string missing;
    for (const auto& path : required)
        if (!fs::exists(path)) missing += "\n  " + path.string();
    if (!missing.empty())
        throw std::runtime_error("missing input files:" + missing);

    const DerivedConstants constants = derive(config.model_params());
    const JointTable<double> theory = load_theory_joint(theory_dir / "joint.csv");
    const double theory_x1 = theory.at(2, 1);
    const auto [lo, hi] = config.resolved_window();

    std::vector<SeedData> seeds;
    seeds.reserve(config.seeds.size());
    for (const std::uint64_t seed : config.seeds)
        seeds.push_back(load_seed_data(config, seed, sim_dir));

    std::vector<double> tvs, emp_tails, x21s, maxw_slopes, maxd_slopes, final_ratio;
    std::vector<std::vector<double>> w_slopes(config.track.size()),
        d_slopes(config.track.size()), vertex_ratio(config.track.size());
    double theory_tail = 0;
    bool slope_data_missing = false;
    for (const auto& data : seeds) {
        const TvResult tv = tv_distance(data.joint, theory, config.support_cap);
        tvs.push_back(tv.tv_support);
        emp_tails.push_back(tv.emp_tail_mass);
        theory_tail = tv.theory_tail_mass;
        x21s.push_back(static_cast<double>(data.joint.counts.at(2, 1)) /
                       static_cast<double>(data.joint.vertex_count));
        if (const auto s = window_slope(data.ns, data.max_w, lo, hi))
            maxw_slopes.push_back(*s);
        else
            slope_data_missing = true;
        if (const auto s = window_slope(data.ns, data.max_d, lo, hi))
            maxd_slopes.push_back(*s);
        else
            slope_data_missing = true;
        if (!data.max_w.empty() && data.max_w.back() > 0)
            final_ratio.push_back(data.max_d.back() / data.max_w.back());
        for (std::size_t t = 0; t < config.track.size(); ++t) {
            if (const auto s = window_slope(data.ns, data.tracked_w[t], lo, hi))
                w_slopes[t].push_back(*s);
            else
                slope_data_missing = true;
            if (const auto s = window_slope(data.ns, data.tracked_d[t], lo, hi))
                d_slopes[t].push_back(*s);
            else
                slope_data_missing = true;
            if (!data.tracked_w[t].empty() && data.tracked_w[t].back() > 0)
                vertex_ratio[t].push_back(data.tracked_d[t].back() /
                                          data.tracked_w[t].back());
        }
    }

    const bool degenerate = constants.degenerate_alpha;
    const bool no_degree_growth = constants.alpha2 <= 0;
    const double ratio_target = no_degree_growth ? 0.0 : constants.alpha2 / constants.alpha;

    json checks = json::array();
    checks.push_back(check_json("tv_support", aggregate(tvs), 0.0, config.tol_tv));
    checks.push_back(
        check_json("x21_fraction", aggregate(x21s), theory_x1, config.tol_x21));
    const auto slope_check = [&](const std::string& name, std::vector<double> values,
                                 double target, bool skip, const std::string& note) {
        checks.push_back(check_json(name, aggregate(std::move(values)), target,
                                    config.tol_slope, skip, note));
    };
    const std::string skip_note = degenerate ? "alpha = 0: no power growth" : "";
    slope_check("max_weight_slope", maxw_slopes, constants.alpha, degenerate, skip_note);
    slope_check("max_degree_slope", maxd_slopes, constants.alpha,
                degenerate || no_degree_growth,
                no_degree_growth ? "alpha2 = 0: degrees freeze" : skip_note);
    for (std::size_t t = 0; t < config.track.size(); ++t) {
        const std::string label = std::to_string(config.track[t]);
        slope_check("weight_slope_vertex_" + label, w_slopes[t], constants.alpha,
                    degenerate, skip_note);
        slope_check("degree_slope_vertex_" + label, d_slopes[t], constants.alpha,
                    degenerate || no_degree_growth,
                    no_degree_growth ? "alpha2 = 0: degrees freeze" : skip_note);
        checks.push_back(check_json("final_ratio_vertex_" + label,
                                    aggregate(vertex_ratio[t]), ratio_target,
                                    config.tol_ratio, no_degree_growth || degenerate,
                                    no_degree_growth ? "alpha2 = 0" : skip_note));
    }
    checks.push_back(check_json("final_max_ratio", aggregate(final_ratio), ratio_target,
                                config.tol_ratio, no_degree_growth || degenerate,
                                no_degree_growth ? "alpha2 = 0" : skip_note));

    bool overall = !slope_data_missing;
    for (const auto& check : checks)
        if (!check.at("skipped").get<bool>() && !check.at("pass").get<bool>())
            overall = false;

    json verdict = base_meta(config);
    verdict["window"] = {{"lo", lo}, {"hi", hi}};
    verdict["constants"] = {{"alpha", constants.alpha},
                            {"alpha1", constants.alpha1},
                            {"alpha2", constants.alpha2},
                            {"beta", constants.beta}};
    verdict["tails"] = {{"emp_tail_mean", aggregate(emp_tails).mean},
                        {"theory_tail", theory_tail},
                        {"support_cap", config.support_cap}};
    verdict["checks"] = checks;
    verdict["slope_data_missing"] = slope_data_missing;
    verdict["overall_pass"] = overall;
    json inputs = json::array();
    for (const auto& path : required)
        inputs.push_back({{"file", path.string()},
                          {"fnv1a64", hash_hex(fnv1a64(read_file(path)))}});
    verdict["inputs"] = inputs;

    const fs::path cmp_dir = out_dir / "compare";
    must_create_directories(cmp_dir);
    write_file(cmp_dir / "verdict.json", verdict.dump(2) + "\n");
    return overall ? 0 : 2;
}

// --- kernel test ----------------------------------------------------------------------

namespace {

json cell_json(const KernelCell& cell) {
    return json{{"name", cell.name},
                {"expected", cell.expected},
                {"observed", cell.observed},
                {"z", std::isfinite(cell.z) ? json(cell.z) : json("inf")},
                {"merged", cell.merged}};
}

}  // namespace

int cmd_kernel_test(const ExperimentConfig& config) {
    config.validate();
    if (config.trials < 100'000)
        std::cerr << "warning: kernel test with fewer than 1e5 trials is underpowered\n";

    const ModelParams params = config.model_params();
    const std::uint64_t seed = config.seeds.front();
    GraphState frozen = [&] {
        if (config.kernel_state == "init")
            return init(params, seed, 0, config.occupancy_caps());
        if (config.kernel_state == "six")
            return make_six_vertex_state(params, seed, 0, config.occupancy_caps());
        return GraphState::from_snapshot_json(read_file(config.kernel_state));
    }();

    const KernelReport report = kernel_test(frozen, config.trials, 4.0, seed);

    json doc = base_meta(config);
    doc["state"] = config.kernel_state;
    doc["trials"] = report.trials;
    doc["z_threshold"] = report.z_threshold;
    doc["max_abs_z"] = report.max_abs_z;
    doc["pass"] = report.pass;
    doc["branches"] = json::array();
    for (const auto& cell : report.branch_cells) doc["branches"].push_back(cell_json(cell));
    doc["vertices"] = json::array();
    for (const auto& vr : report.vertices) {
        json v{{"label", vr.label},        {"degree", vr.degree},
               {"weight", vr.weight},      {"participation", vr.participation},
               {"chi_square", vr.chi_square}, {"dof", vr.dof},
               {"max_abs_z", vr.max_abs_z}};
        v["cells"] = json::array();
        for (const auto& cell : vr.cells) v["cells"].push_back(cell_json(cell));
        doc["vertices"].push_back(std::move(v));
    }

    const fs::path dir = fs::path(config.out) / "kernel";
    must_create_directories(dir);
    write_file(dir / "report.json", doc.dump(2) + "\n");
    return report.pass ? 0 : 2;
}

int cmd_all(const ExperimentConfig& config) {
    if (const int code = cmd_theory(config); code != 0) return code;
    if (const int code = cmd_simulate(config); code != 0) return code;
    return cmd_compare(config);
}

}  // namespace tripa
