#include "tripa/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tripa {

const char* to_string(StepBranch branch) {
    switch (branch) {
        case StepBranch::kNewPreferential: return "new-preferential";
        case StepBranch::kNewUniform: return "new-uniform";
        case StepBranch::kOldPreferential: return "old-preferential";
        case StepBranch::kOldUniform: return "old-uniform";
    }
    return "?";
}

std::size_t sample_weighted(const FenwickTree& index, Rng& rng) {
    if (index.size() == 0 || index.total() == 0)
        throw std::logic_error("sample_weighted on empty index");
    return index.find(rng.below(index.total()));
}

std::array<std::uint32_t, 2> sample_uniform_pair(std::uint32_t population, Rng& rng) {
    if (population < 2) throw std::invalid_argument("population < 2");
    const auto first = static_cast<std::uint32_t>(rng.below(population));
    std::uint32_t second;
    do {
        second = static_cast<std::uint32_t>(rng.below(population));
    } while (second == first);
    return {first, second};
}

std::array<std::uint32_t, 3> sample_uniform_triple(std::uint32_t population, Rng& rng) {
    if (population < 3) throw std::invalid_argument("population < 3");
    const auto first = static_cast<std::uint32_t>(rng.below(population));
    std::uint32_t second;
    do {
        second = static_cast<std::uint32_t>(rng.below(population));
    } while (second == first);
    std::uint32_t third;
    do {
        third = static_cast<std::uint32_t>(rng.below(population));
    } while (third == first || third == second);
    return {first, second, third};
}

// --- GraphState --------------------------------------------------------------

GraphState::GraphState(const ModelParams& params, std::uint64_t seed, std::uint64_t stream,
                       OccupancyCaps caps)
    : params_(params),
      p_(params.pd()),
      q_(params.qd()),
      r_(params.rd()),
      seed_(seed),
      stream_(stream),
      rng_(seed, stream),
      occupancy_(caps) {
    params_.validate();
    vertices_.assign(3, VertexRecord{1, 2, 0});
    for (auto [u, v] : {std::pair{0u, 1u}, {0u, 2u}, {1u, 2u}}) {
        edge_ids_.emplace(edge_key(u, v), static_cast<std::uint32_t>(edges_.size()));
        edges_.emplace_back(u, v);
        edge_weights_.append(1);
    }
    triangle_ids_.emplace(TriangleKey{0, 1, 2}, 0);
    triangles_.push_back({0, 1, 2});
    triangle_weights_.append(1);
    for (int i = 0; i < 3; ++i) occupancy_.add_vertex(2, 1);
    max_weight_ = 1;
    max_degree_ = 2;
}

GraphState::TriangleKey GraphState::triangle_key(std::uint32_t a, std::uint32_t b,
                                                 std::uint32_t c) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return {a, b, c};
}

std::uint32_t GraphState::index_of(VertexLabel label) const {
    if (!exists(label))
        throw std::out_of_range("vertex label " + std::to_string(label) + " does not exist");
    return static_cast<std::uint32_t>(label + 2);
}

const VertexRecord& GraphState::record(VertexLabel label) const {
    return vertices_[index_of(label)];
}

bool GraphState::has_edge(VertexLabel a, VertexLabel b) const {
    return edge_ids_.count(edge_key(index_of(a), index_of(b))) > 0;
}

std::uint64_t GraphState::edge_weight(VertexLabel a, VertexLabel b) const {
    const auto it = edge_ids_.find(edge_key(index_of(a), index_of(b)));
    return it == edge_ids_.end() ? 0 : edge_weights_.value(it->second);
}

std::uint64_t GraphState::triangle_weight(VertexLabel a, VertexLabel b, VertexLabel c) const {
    const auto it =
        triangle_ids_.find(triangle_key(index_of(a), index_of(b), index_of(c)));
    return it == triangle_ids_.end() ? 0 : triangle_weights_.value(it->second);
}

std::pair<std::uint32_t, bool> GraphState::ensure_edge(std::uint32_t u, std::uint32_t v) {
    const auto [it, inserted] =
        edge_ids_.try_emplace(edge_key(u, v), static_cast<std::uint32_t>(edges_.size()));
    if (inserted) {
        edges_.emplace_back(std::min(u, v), std::max(u, v));
        edge_weights_.append(0);
        const std::uint32_t du = ++vertices_[u].degree;
        const std::uint32_t dv = ++vertices_[v].degree;
        max_degree_ = std::max({max_degree_, du, dv});
    }
    return {it->second, inserted};
}

std::uint32_t GraphState::ensure_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    const TriangleKey key = triangle_key(a, b, c);
    const auto [it, inserted] =
        triangle_ids_.try_emplace(key, static_cast<std::uint32_t>(triangles_.size()));
    if (inserted) {
        triangles_.push_back({key.a, key.b, key.c});
        triangle_weights_.append(0);
    }
    return it->second;
}

StepOutcome GraphState::interact(std::uint32_t x, std::uint32_t y, std::uint32_t z,
                                 StepBranch branch, bool has_new_vertex) {
    if (x == y || x == z || y == z)
        throw std::logic_error("interaction triple is not distinct");

    // pre-step (degree, weight) of the old participants, for the occupancy update
    struct PriorCell {
        std::uint32_t vertex;
        std::uint32_t degree;
        std::uint64_t weight;
    };
    PriorCell prior[3];
    int prior_count = 0;
    for (std::uint32_t v : {x, y, z})
        if (!(has_new_vertex && v == x))
            prior[prior_count++] = {v, vertices_[v].degree, vertices_[v].weight};

    StepOutcome outcome;
    outcome.branch = branch;
    outcome.triple = {static_cast<VertexLabel>(x) - 2, static_cast<VertexLabel>(y) - 2,
                      static_cast<VertexLabel>(z) - 2};
    if (has_new_vertex) outcome.new_vertex = static_cast<VertexLabel>(x) - 2;

    const auto [e1, c1] = ensure_edge(x, y);
    const auto [e2, c2] = ensure_edge(x, z);
    const auto [e3, c3] = ensure_edge(y, z);
    outcome.created_edges = static_cast<int>(c1) + static_cast<int>(c2) + static_cast<int>(c3);

    edge_weights_.add(e1, 1);
    edge_weights_.add(e2, 1);
    edge_weights_.add(e3, 1);
    triangle_weights_.add(ensure_triangle(x, y, z), 1);

    for (std::uint32_t v : {x, y, z}) {
        const std::uint64_t w = ++vertices_[v].weight;
        if (w > max_weight_) max_weight_ = w;
    }
    ++n_;

    if (has_new_vertex) occupancy_.add_vertex(vertices_[x].degree, vertices_[x].weight);
    for (int i = 0; i < prior_count; ++i)
        occupancy_.transition(prior[i].degree, prior[i].weight,
                              vertices_[prior[i].vertex].degree,
                              vertices_[prior[i].vertex].weight);

    // O(1) totals check, always on
    if (total_triangle_weight() != static_cast<std::uint64_t>(n_) + 1 ||
        total_edge_weight() != 3 * (static_cast<std::uint64_t>(n_) + 1))
        throw std::logic_error("weight totals out of sync after step " + std::to_string(n_));
    return outcome;
}

StepOutcome GraphState::new_vertex_step(std::uint32_t a, std::uint32_t b, StepBranch branch) {
    vertices_.push_back(VertexRecord{0, 0, n_ + 1});
    const auto v = static_cast<std::uint32_t>(vertices_.size() - 1);
    return interact(v, a, b, branch, true);
}

StepOutcome GraphState::step() {
    if (rng_.u01() < p_) {
        if (rng_.u01() < r_) {
            const auto& endpoints = edges_[sample_weighted(edge_weights_, rng_)];
            return new_vertex_step(endpoints.first, endpoints.second,
                                   StepBranch::kNewPreferential);
        }
        const auto pair =
            sample_uniform_pair(static_cast<std::uint32_t>(vertices_.size()), rng_);
        return new_vertex_step(pair[0], pair[1], StepBranch::kNewUniform);
    }
    if (rng_.u01() < q_) {
        const auto& t = triangles_[sample_weighted(triangle_weights_, rng_)];
        return interact(t[0], t[1], t[2], StepBranch::kOldPreferential, false);
    }
    const auto t = sample_uniform_triple(static_cast<std::uint32_t>(vertices_.size()), rng_);
    return interact(t[0], t[1], t[2], StepBranch::kOldUniform, false);
}

StepOutcome GraphState::apply_new_vertex_interaction(VertexLabel a, VertexLabel b,
                                                     StepBranch branch) {
    if (branch != StepBranch::kNewPreferential && branch != StepBranch::kNewUniform)
        throw std::invalid_argument("branch must be a new-vertex branch");
    if (branch == StepBranch::kNewPreferential && !has_edge(a, b))
        throw std::invalid_argument("preferential pair must already share an edge");
    return new_vertex_step(index_of(a), index_of(b), branch);
}

StepOutcome GraphState::apply_old_interaction(VertexLabel a, VertexLabel b, VertexLabel c,
                                              StepBranch branch) {
    if (branch != StepBranch::kOldPreferential && branch != StepBranch::kOldUniform)
        throw std::invalid_argument("branch must be an old-vertex branch");
    if (branch == StepBranch::kOldPreferential && triangle_weight(a, b, c) == 0)
        throw std::invalid_argument("preferential triple must already form a triangle");
    return interact(index_of(a), index_of(b), index_of(c), branch, false);
}

void GraphState::reserve_for_steps(std::int64_t steps) {
    if (steps <= 0) return;
    const auto extra = static_cast<std::size_t>(steps);
    vertices_.reserve(vertices_.size() + extra);
    edges_.reserve(edges_.size() + 3 * extra);
    triangles_.reserve(triangles_.size() + extra);
    edge_ids_.reserve(edges_.size() + 3 * extra);
    triangle_ids_.reserve(triangles_.size() + extra);
}

void GraphState::validate() const {
    const auto fail = [this](const std::string& what) {
        throw std::logic_error("state invariant violated after step " + std::to_string(n_) +
                               ": " + what);
    };
    const auto v_count = vertices_.size();
    if (v_count < 3) fail("fewer than 3 vertices");
    if (edges_.size() != edge_ids_.size() || edge_weights_.size() != edges_.size())
        fail("edge bookkeeping sizes disagree");
    if (triangles_.size() != triangle_ids_.size() ||
        triangle_weights_.size() != triangles_.size())
        fail("triangle bookkeeping sizes disagree");

    const auto n1 = static_cast<std::uint64_t>(n_) + 1;
    if (total_triangle_weight() != n1) fail("total triangle weight != n+1");
    if (total_edge_weight() != 3 * n1) fail("total edge weight != 3(n+1)");

    std::vector<std::uint64_t> weight_from_triangles(v_count, 0);
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const std::uint64_t w = triangle_weights_.value(t);
        if (w == 0) fail("triangle with zero weight");
        for (std::uint32_t v : triangles_[t]) weight_from_triangles[v] += w;
    }
    std::vector<std::uint64_t> incident_edge_weight(v_count, 0);
    std::vector<std::uint32_t> degree_recount(v_count, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const std::uint64_t w = edge_weights_.value(e);
        if (w == 0) fail("edge with zero weight");
        const auto [u, v] = edges_[e];
        incident_edge_weight[u] += w;
        incident_edge_weight[v] += w;
        ++degree_recount[u];
        ++degree_recount[v];
    }

    OccupancyCounts recount(occupancy_.caps());
    std::uint64_t max_w = 0;
    std::uint32_t max_d = 0;
    for (std::size_t v = 0; v < v_count; ++v) {
        const auto& rec = vertices_[v];
        if (rec.weight != weight_from_triangles[v])
            fail("vertex weight != sum of its triangle weights (vertex " +
                 std::to_string(static_cast<VertexLabel>(v) - 2) + ")");
        if (2 * rec.weight != incident_edge_weight[v])
            fail("2*weight != incident edge weight sum (vertex " +
                 std::to_string(static_cast<VertexLabel>(v) - 2) + ")");
        if (rec.degree != degree_recount[v]) fail("stored degree != neighbour count");
        if (rec.degree < 2 || rec.degree > 2 * rec.weight) fail("degree outside [2, 2*weight]");
        recount.add_vertex(rec.degree, rec.weight);
        max_w = std::max(max_w, rec.weight);
        max_d = std::max(max_d, rec.degree);
    }
    if (max_w != max_weight_ || max_d != max_degree_) fail("cached maxima stale");
    if (!(recount == occupancy_)) fail("incremental occupancy disagrees with recount");
    if (occupancy_.total() != static_cast<std::int64_t>(v_count))
        fail("occupancy total != vertex count");
}

// --- snapshots ----------------------------------------------------------------

std::string GraphState::to_snapshot_json() const {
    nlohmann::json doc;
    doc["schema"] = "tripa.snapshot/1";
    doc["params"] = {{"p", format_rational(params_.p)},
                     {"q", format_rational(params_.q)},
                     {"r", format_rational(params_.r)}};
    doc["seed"] = seed_;
    doc["stream"] = stream_;
    doc["n"] = n_;
    doc["rng"] = {{"algorithm", Rng::algorithm},
                  {"state", {rng_.state()[0], rng_.state()[1], rng_.state()[2],
                             rng_.state()[3]}}};
    doc["caps"] = {{"w_cap", occupancy_.caps().w_cap}, {"d_cap", occupancy_.caps().d_cap}};

    auto& vertices = doc["vertices"] = nlohmann::json::array();
    for (const auto& rec : vertices_)
        vertices.push_back({rec.weight, rec.degree, rec.birth_step});
    auto& edges = doc["edges"] = nlohmann::json::array();
    for (std::size_t e = 0; e < edges_.size(); ++e)
        edges.push_back({static_cast<VertexLabel>(edges_[e].first) - 2,
                         static_cast<VertexLabel>(edges_[e].second) - 2,
                         edge_weights_.value(e)});
    auto& triangles = doc["triangles"] = nlohmann::json::array();
    for (std::size_t t = 0; t < triangles_.size(); ++t)
        triangles.push_back({static_cast<VertexLabel>(triangles_[t][0]) - 2,
                             static_cast<VertexLabel>(triangles_[t][1]) - 2,
                             static_cast<VertexLabel>(triangles_[t][2]) - 2,
                             triangle_weights_.value(t)});
    return doc.dump(2);
}

GraphState GraphState::from_snapshot_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<std::string>() != "tripa.snapshot/1")
        throw std::invalid_argument("unsupported snapshot schema");

    GraphState state;
    state.params_ = ModelParams::from_strings(doc.at("params").at("p").get<std::string>(),
                                              doc.at("params").at("q").get<std::string>(),
                                              doc.at("params").at("r").get<std::string>());
    state.p_ = state.params_.pd();
    state.q_ = state.params_.qd();
    state.r_ = state.params_.rd();
    state.seed_ = doc.at("seed").get<std::uint64_t>();
    state.stream_ = doc.at("stream").get<std::uint64_t>();
    state.n_ = doc.at("n").get<std::int64_t>();
    const auto& rng_state = doc.at("rng").at("state");
    state.rng_.set_state({rng_state.at(0).get<std::uint64_t>(),
                          rng_state.at(1).get<std::uint64_t>(),
                          rng_state.at(2).get<std::uint64_t>(),
                          rng_state.at(3).get<std::uint64_t>()});
    state.occupancy_ = OccupancyCounts(
        OccupancyCaps{doc.at("caps").at("w_cap").get<unsigned>(),
                      doc.at("caps").at("d_cap").get<unsigned>()});

    for (const auto& entry : doc.at("vertices"))
        state.vertices_.push_back(VertexRecord{entry.at(0).get<std::uint64_t>(),
                                               entry.at(1).get<std::uint32_t>(),
                                               entry.at(2).get<std::int64_t>()});
    for (const auto& entry : doc.at("edges")) {
        const auto u = state.index_of(entry.at(0).get<VertexLabel>());
        const auto v = state.index_of(entry.at(1).get<VertexLabel>());
        state.edge_ids_.emplace(edge_key(u, v),
                                static_cast<std::uint32_t>(state.edges_.size()));
        state.edges_.emplace_back(std::min(u, v), std::max(u, v));
        state.edge_weights_.append(entry.at(2).get<std::uint64_t>());
    }
    for (const auto& entry : doc.at("triangles")) {
        const auto key = triangle_key(state.index_of(entry.at(0).get<VertexLabel>()),
                                      state.index_of(entry.at(1).get<VertexLabel>()),
                                      state.index_of(entry.at(2).get<VertexLabel>()));
        state.triangle_ids_.emplace(key,
                                    static_cast<std::uint32_t>(state.triangles_.size()));
        state.triangles_.push_back({key.a, key.b, key.c});
        state.triangle_weights_.append(entry.at(3).get<std::uint64_t>());
    }
    for (const auto& rec : state.vertices_) {
        state.occupancy_.add_vertex(rec.degree, rec.weight);
        state.max_weight_ = std::max(state.max_weight_, rec.weight);
        state.max_degree_ = std::max(state.max_degree_, rec.degree);
    }
    state.validate();
    return state;
}

// --- fixtures and driving -----------------------------------------------------

GraphState init(const ModelParams& params, std::uint64_t seed, std::uint64_t stream,
                OccupancyCaps caps) {
    return GraphState(params, seed, stream, caps);
}

GraphState make_six_vertex_state(const ModelParams& params, std::uint64_t seed,
                                 std::uint64_t stream, OccupancyCaps caps) {
    GraphState state(params, seed, stream, caps);
    state.apply_old_interaction(-2, -1, 0, StepBranch::kOldPreferential);
    state.apply_new_vertex_interaction(-2, -1, StepBranch::kNewPreferential);
    state.apply_new_vertex_interaction(-2, 1, StepBranch::kNewPreferential);
    state.apply_new_vertex_interaction(-1, 0, StepBranch::kNewPreferential);
    state.validate();
    return state;
}

std::vector<TrajectoryRecord> run(GraphState& state, std::int64_t steps,
                                  const std::vector<std::int64_t>& checkpoints,
                                  const std::vector<VertexLabel>& tracked,
                                  ValidateMode mode) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    const std::int64_t start = state.step_count();
    std::int64_t previous = start;
    for (const std::int64_t c : checkpoints) {
        if (c <= previous)
            throw std::invalid_argument("checkpoints must be strictly increasing and > n");
        if (c > start + steps)
            throw std::invalid_argument("checkpoint beyond the end of the run");
        previous = c;
    }

    state.reserve_for_steps(steps);
    std::vector<TrajectoryRecord> records;
    records.reserve(checkpoints.size());
    std::size_t next = 0;
    for (std::int64_t i = 0; i < steps; ++i) {
        state.step();
        if (mode == ValidateMode::kEveryStep) state.validate();
        if (next < checkpoints.size() && state.step_count() == checkpoints[next]) {
            if (mode == ValidateMode::kCheckpoints) state.validate();
            TrajectoryRecord record{state.step_count(),
                                    state.vertex_count(),
                                    state.max_weight(),
                                    state.max_degree(),
                                    {},
                                    state.occupancy()};
            record.tracked.reserve(tracked.size());
            for (const VertexLabel label : tracked)
                record.tracked.emplace_back(
                    state.exists(label) ? state.weight(label) : 0,
                    state.exists(label) ? state.degree(label) : 0);
            records.push_back(std::move(record));
            ++next;
        }
    }
    if (mode == ValidateMode::kFinal || mode == ValidateMode::kCheckpoints) state.validate();
    return records;
}

}  // namespace tripa
