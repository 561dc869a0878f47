#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace annealbench {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

enum class Side : std::uint8_t { none = 0, left = 1, right = 2 };

inline constexpr std::int64_t kNoGroup = -1;

enum class GraphKind {
    generic,
    base_bipartite,
    clique_blowup,
    bipartite_blowup,
    random_bipartite,
    star_tree,
    hard_tree,
    forest,
    anchor,
    multicopy,
};

std::string_view to_string(GraphKind kind);
GraphKind graph_kind_from_string(std::string_view name);

/// True for families whose side labels must describe a proper bipartition.
bool is_bipartite_kind(GraphKind kind);

/// Optional per-vertex annotations. Empty vectors mean "absent".
struct VertexLabels {
    std::vector<Side> sides;
    std::vector<std::int64_t> groups;
};

/// Immutable undirected simple graph in compressed-row form. Neighbor lists
/// are sorted and duplicate-free; construction goes through build_graph.
class Graph {
public:
    Graph() = default;

    std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

    std::span<const VertexId> neighbors(VertexId v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool adjacent(VertexId u, VertexId v) const noexcept;

    bool has_sides() const noexcept { return !sides_.empty(); }
    Side side(VertexId v) const noexcept { return sides_.empty() ? Side::none : sides_[v]; }
    std::span<const Side> sides() const noexcept { return sides_; }

    bool has_groups() const noexcept { return !groups_.empty(); }
    std::int64_t group(VertexId v) const noexcept { return groups_.empty() ? kNoGroup : groups_[v]; }
    std::span<const std::int64_t> groups() const noexcept { return groups_; }

    GraphKind kind() const noexcept { return kind_; }

    /// Every edge once as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    friend Graph build_graph(std::size_t, std::span<const Edge>, VertexLabels, GraphKind);

    std::vector<std::size_t> offsets_;
    std::vector<VertexId> adjacency_;
    std::vector<Side> sides_;
    std::vector<std::int64_t> groups_;
    GraphKind kind_ = GraphKind::generic;
};

/// Builds a graph from an edge list. Duplicate and reversed edges collapse;
/// self-loops and out-of-range endpoints raise InvalidEdge. For bipartite
/// kinds with side labels, an edge between two same-side vertices raises
/// NotBipartite.
Graph build_graph(std::size_t num_vertices, std::span<const Edge> edges, VertexLabels labels = {},
                  GraphKind kind = GraphKind::generic);

bool is_independent(const Graph& g, std::span<const VertexId> set);

/// Side labels present on every vertex as left/right and every edge crosses.
bool has_valid_bipartition(const Graph& g);

bool is_forest(const Graph& g);

/// Plain-text graph format:
///   p is <num_vertices> <num_edges>
///   e <u> <v>          one per edge, u < v, sorted
///   l <v> <L|R>        per labeled vertex
///   g <v> <group_id>   per grouped vertex
/// Lines starting with 'c' are comments and are skipped on input.
void write_graph(std::ostream& out, const Graph& g);
std::string format_graph(const Graph& g);
Graph read_graph(std::istream& in, GraphKind kind = GraphKind::generic);
Graph parse_graph(std::string_view text, GraphKind kind = GraphKind::generic);
Graph load_graph(const std::string& path, GraphKind kind = GraphKind::generic);
void save_graph(const std::string& path, const Graph& g);

/// Occupancy of an independent set being evolved by a local search process.
/// One byte per vertex; size and running maximum are maintained on update.
class IndependentSetState {
public:
    IndependentSetState() = default;
    explicit IndependentSetState(std::size_t num_vertices) : occupied_(num_vertices, 0) {}

    bool contains(VertexId v) const noexcept { return occupied_[v] != 0; }

    void insert(VertexId v) noexcept {
        occupied_[v] = 1;
        ++size_;
        if (size_ > max_size_) max_size_ = size_;
    }
    void erase(VertexId v) noexcept {
        occupied_[v] = 0;
        --size_;
    }

    std::size_t size() const noexcept { return size_; }
    std::size_t max_size_seen() const noexcept { return max_size_; }
    std::uint64_t step() const noexcept { return step_; }
    void advance() noexcept { ++step_; }

    std::size_t num_vertices() const noexcept { return occupied_.size(); }
    std::span<const std::uint8_t> occupancy() const noexcept { return occupied_; }
    std::vector<VertexId> members() const;

    /// Resets to the given set; the running maximum restarts at its size.
    void assign(std::span<const VertexId> set);

private:
    std::vector<std::uint8_t> occupied_;
    std::size_t size_ = 0;
    std::size_t max_size_ = 0;
    std::uint64_t step_ = 0;
};

/// True iff no edge has both endpoints occupied.
bool state_is_independent(const Graph& g, const IndependentSetState& state);

}  // namespace annealbench
