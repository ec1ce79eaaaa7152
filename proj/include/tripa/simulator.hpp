#pragma once

#include "tripa/fenwick.hpp"
#include "tripa/params.hpp"
#include "tripa/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tripa {

using VertexLabel = std::int64_t;  // -2, -1, 0 for the initial triangle, then 1, 2, ...

enum class StepBranch : unsigned char {
    kNewPreferential,  // new vertex, endpoints of a weight-proportional edge
    kNewUniform,       // new vertex, uniform distinct old pair
    kOldPreferential,  // weight-proportional triangle
    kOldUniform,       // uniform distinct old triple
};

const char* to_string(StepBranch branch);

struct StepOutcome {
    StepBranch branch;
    std::array<VertexLabel, 3> triple;  // the three interacting vertices
    int created_edges = 0;              // 0..3 edges drawn this step
    std::optional<VertexLabel> new_vertex;
};

// --- weighted / uniform selection -------------------------------------------

// element index with probability weight/total; throws on empty index
std::size_t sample_weighted(const FenwickTree& index, Rng& rng);

// uniform over unordered pairs/triples of distinct elements of {0,...,population-1},
// by per-element rejection
std::array<std::uint32_t, 2> sample_uniform_pair(std::uint32_t population, Rng& rng);
std::array<std::uint32_t, 3> sample_uniform_triple(std::uint32_t population, Rng& rng);

// --- occupancy histogram -----------------------------------------------------

struct OccupancyCaps {
    unsigned w_cap = 64;
    unsigned d_cap = 128;
    friend bool operator==(const OccupancyCaps&, const OccupancyCaps&) = default;
};

// Counts of vertices by (degree, weight) inside the caps, plus a single
// overflow bucket for everything outside. Maintained incrementally by the
// simulator; a full recount happens in GraphState::validate().
class OccupancyCounts {
public:
    explicit OccupancyCounts(OccupancyCaps caps = {})
        : caps_(caps),
          counts_(static_cast<std::size_t>(caps.w_cap) * (caps.d_cap - 1), 0) {}

    OccupancyCaps caps() const { return caps_; }
    std::int64_t total() const { return total_; }
    std::int64_t overflow() const { return overflow_; }

    bool in_caps(unsigned degree, std::uint64_t weight) const {
        return weight >= 1 && weight <= caps_.w_cap && degree >= 2 && degree <= caps_.d_cap;
    }

    std::int64_t at(unsigned degree, std::uint64_t weight) const {
        return in_caps(degree, weight) ? counts_[slot(degree, weight)] : 0;
    }

    void add_vertex(unsigned degree, std::uint64_t weight) {
        bump(degree, weight, +1);
        ++total_;
    }

    void transition(unsigned degree_before, std::uint64_t weight_before,
                    unsigned degree_after, std::uint64_t weight_after) {
        bump(degree_before, weight_before, -1);
        bump(degree_after, weight_after, +1);
    }

    // bulk loaders for rebuilding a histogram from persisted cells
    void add_count(unsigned degree, std::uint64_t weight, std::int64_t count) {
        if (!in_caps(degree, weight))
            throw std::out_of_range("occupancy cell outside caps");
        counts_[slot(degree, weight)] += count;
        total_ += count;
    }
    void add_overflow(std::int64_t count) {
        overflow_ += count;
        total_ += count;
    }

    friend bool operator==(const OccupancyCounts&, const OccupancyCounts&) = default;

private:
    std::size_t slot(unsigned degree, std::uint64_t weight) const {
        return static_cast<std::size_t>(weight - 1) * (caps_.d_cap - 1) + (degree - 2);
    }

    void bump(unsigned degree, std::uint64_t weight, std::int64_t delta) {
        if (in_caps(degree, weight))
            counts_[slot(degree, weight)] += delta;
        else
            overflow_ += delta;
    }

    OccupancyCaps caps_;
    std::vector<std::int64_t> counts_;
    std::int64_t overflow_ = 0;
    std::int64_t total_ = 0;
};

// --- evolving graph state ----------------------------------------------------

struct VertexRecord {
    std::uint64_t weight = 0;   // number of interactions participated in
    std::uint32_t degree = 0;   // distinct neighbours
    std::int64_t birth_step = 0;
};

// State after n steps of the (p,q,r) dynamics. Starts as a single triangle
// with all weights 1. Each step selects three interacting vertices, draws the
// missing edges among them, and increments the triangle weight, the three
// edge weights and the three vertex weights by one. Copyable; single-threaded.
class GraphState {
public:
    GraphState(const ModelParams& params, std::uint64_t seed, std::uint64_t stream = 0,
               OccupancyCaps caps = {});

    // executes step n+1 by sampling the interaction
    StepOutcome step();

    // deterministic state updates for a chosen interaction (fixtures, tests)
    StepOutcome apply_new_vertex_interaction(VertexLabel a, VertexLabel b, StepBranch branch);
    StepOutcome apply_old_interaction(VertexLabel a, VertexLabel b, VertexLabel c,
                                      StepBranch branch);

    std::int64_t step_count() const { return n_; }
    std::int64_t vertex_count() const { return static_cast<std::int64_t>(vertices_.size()); }
    VertexLabel min_label() const { return -2; }
    VertexLabel max_label() const { return vertex_count() - 3; }
    bool exists(VertexLabel label) const { return label >= -2 && label <= max_label(); }

    std::uint64_t weight(VertexLabel label) const { return record(label).weight; }
    std::uint32_t degree(VertexLabel label) const { return record(label).degree; }
    std::int64_t birth_step(VertexLabel label) const { return record(label).birth_step; }

    std::uint64_t max_weight() const { return max_weight_; }
    std::uint32_t max_degree() const { return max_degree_; }

    std::uint64_t total_edge_weight() const { return edge_weights_.total(); }
    std::uint64_t total_triangle_weight() const { return triangle_weights_.total(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t triangle_count() const { return triangles_.size(); }

    bool has_edge(VertexLabel a, VertexLabel b) const;
    std::uint64_t edge_weight(VertexLabel a, VertexLabel b) const;     // 0 when absent
    std::uint64_t triangle_weight(VertexLabel a, VertexLabel b, VertexLabel c) const;

    const OccupancyCounts& occupancy() const { return occupancy_; }
    const ModelParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    Rng& rng() { return rng_; }

    // pre-sizes the containers for an upcoming number of steps
    void reserve_for_steps(std::int64_t steps);

    // Full recount of every invariant (weights, degrees, totals, occupancy);
    // throws std::logic_error with a diagnostic on the first violation.
    void validate() const;

    // versioned JSON snapshot; round-trips exactly, including the generator state
    std::string to_snapshot_json() const;
    static GraphState from_snapshot_json(const std::string& text);

private:
    struct TriangleKey {
        std::uint32_t a, b, c;  // sorted ascending
        friend bool operator==(const TriangleKey&, const TriangleKey&) = default;
    };
    struct TriangleKeyHash {
        std::size_t operator()(const TriangleKey& k) const {
            std::uint64_t h = (static_cast<std::uint64_t>(k.a) << 32) | k.b;
            h ^= 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k.c) + 1);
            return static_cast<std::size_t>(splitmix64(h));
        }
    };

    GraphState() = default;  // for snapshot loading

    static std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }
    static TriangleKey triangle_key(std::uint32_t a, std::uint32_t b, std::uint32_t c);

    std::uint32_t index_of(VertexLabel label) const;
    const VertexRecord& record(VertexLabel label) const;

    std::pair<std::uint32_t, bool> ensure_edge(std::uint32_t u, std::uint32_t v);
    std::uint32_t ensure_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c);

    StepOutcome interact(std::uint32_t x, std::uint32_t y, std::uint32_t z,
                         StepBranch branch, bool has_new_vertex);
    StepOutcome new_vertex_step(std::uint32_t a, std::uint32_t b, StepBranch branch);

    ModelParams params_;
    double p_ = 1, q_ = 0, r_ = 1;
    std::uint64_t seed_ = 0, stream_ = 0;
    Rng rng_;
    std::int64_t n_ = 0;

    std::vector<VertexRecord> vertices_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;       // insertion order
    std::vector<std::array<std::uint32_t, 3>> triangles_;              // insertion order
    std::unordered_map<std::uint64_t, std::uint32_t> edge_ids_;
    std::unordered_map<TriangleKey, std::uint32_t, TriangleKeyHash> triangle_ids_;
    FenwickTree edge_weights_;
    FenwickTree triangle_weights_;
    OccupancyCounts occupancy_;
    std::uint64_t max_weight_ = 0;
    std::uint32_t max_degree_ = 0;
};

// initial state: triangle on labels -2, -1, 0, all weights 1
GraphState init(const ModelParams& params, std::uint64_t seed, std::uint64_t stream = 0,
                OccupancyCaps caps = {});

// Deterministic 6-vertex, 4-step fixture with heterogeneous degrees and
// weights; used by the single-step kernel test.
GraphState make_six_vertex_state(const ModelParams& params, std::uint64_t seed,
                                 std::uint64_t stream = 0, OccupancyCaps caps = {});

// --- trajectory recording ----------------------------------------------------

struct TrajectoryRecord {
    std::int64_t n = 0;
    std::int64_t vertex_count = 0;
    std::uint64_t max_weight = 0;
    std::uint32_t max_degree = 0;
    // (W[n,j], D[n,j]) per tracked label, zeros while the vertex is unborn
    std::vector<std::pair<std::uint64_t, std::uint32_t>> tracked;
    OccupancyCounts occupancy;
};

enum class ValidateMode { kNone, kFinal, kCheckpoints, kEveryStep };

// Advances `steps` steps, emitting a record at each checkpoint (absolute step
// numbers, strictly increasing, inside (n, n+steps]). Throws on a bad
// checkpoint list.
std::vector<TrajectoryRecord> run(GraphState& state, std::int64_t steps,
                                  const std::vector<std::int64_t>& checkpoints,
                                  const std::vector<VertexLabel>& tracked,
                                  ValidateMode mode = ValidateMode::kFinal);

}  // namespace tripa
