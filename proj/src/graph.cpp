#include "annealbench/graph.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "annealbench/errors.hpp"

namespace annealbench {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidEdge: return "InvalidEdge";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotBipartite: return "NotBipartite";
    case ErrorKind::NotAForest: return "NotAForest";
    case ErrorKind::InvalidDenseParams: return "InvalidDenseParams";
    case ErrorKind::InvalidFugacity: return "InvalidFugacity";
    case ErrorKind::InvalidRate: return "InvalidRate";
    case ErrorKind::NotIndependent: return "NotIndependent";
    case ErrorKind::InvalidDrift: return "InvalidDrift";
    case ErrorKind::InvalidChain: return "InvalidChain";
    case ErrorKind::OutOfRegime: return "OutOfRegime";
    case ErrorKind::InsufficientRecord: return "InsufficientRecord";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::IncompleteRun: return "IncompleteRun";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

namespace {

constexpr std::array<std::pair<GraphKind, std::string_view>, 10> kKindNames{{
    {GraphKind::generic, "generic"},
    {GraphKind::base_bipartite, "base_bipartite"},
    {GraphKind::clique_blowup, "clique_blowup"},
    {GraphKind::bipartite_blowup, "bipartite_blowup"},
    {GraphKind::random_bipartite, "random_bipartite"},
    {GraphKind::star_tree, "star_tree"},
    {GraphKind::hard_tree, "hard_tree"},
    {GraphKind::forest, "forest"},
    {GraphKind::anchor, "anchor"},
    {GraphKind::multicopy, "multicopy"},
}};

}  // namespace

std::string_view to_string(GraphKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "generic";
}

GraphKind graph_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw Error(ErrorKind::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

bool is_bipartite_kind(GraphKind kind) {
    switch (kind) {
    case GraphKind::base_bipartite:
    case GraphKind::bipartite_blowup:
    case GraphKind::random_bipartite:
    case GraphKind::star_tree:
    case GraphKind::hard_tree:
    case GraphKind::forest:
        return true;
    default:
        return false;
    }
}

bool Graph::adjacent(VertexId u, VertexId v) const noexcept {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (VertexId u = 0; u < num_vertices(); ++u)
        for (VertexId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph build_graph(std::size_t num_vertices, std::span<const Edge> edges, VertexLabels labels, GraphKind kind) {
    if (num_vertices > std::numeric_limits<VertexId>::max())
        throw Error(ErrorKind::TooLarge, "vertex count exceeds 32-bit ids");
    if (!labels.sides.empty() && labels.sides.size() != num_vertices)
        throw Error(ErrorKind::InvalidArgument, "side label count does not match vertex count");
    if (!labels.groups.empty() && labels.groups.size() != num_vertices)
        throw Error(ErrorKind::InvalidArgument, "group count does not match vertex count");

    Graph g;
    g.kind_ = kind;
    g.offsets_.assign(num_vertices + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= num_vertices || v >= num_vertices)
            throw Error(ErrorKind::InvalidEdge,
                        "endpoint out of range in edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (u == v) throw Error(ErrorKind::InvalidEdge, "self-loop at vertex " + std::to_string(u));
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    std::vector<VertexId> raw(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        raw[cursor[u]++] = v;
        raw[cursor[v]++] = u;
    }

    // Sort and deduplicate each row, compacting in place.
    std::vector<std::size_t> compact(num_vertices + 1, 0);
    std::size_t write = 0;
    for (std::size_t v = 0; v < num_vertices; ++v) {
        auto first = raw.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = raw.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last);
        last = std::unique(first, last);
        compact[v] = write;
        for (auto it = first; it != last; ++it) raw[write++] = *it;
    }
    compact[num_vertices] = write;
    raw.resize(write);
    raw.shrink_to_fit();
    g.offsets_ = std::move(compact);
    g.adjacency_ = std::move(raw);
    g.sides_ = std::move(labels.sides);
    g.groups_ = std::move(labels.groups);

    if (is_bipartite_kind(kind) && g.has_sides()) {
        for (VertexId u = 0; u < num_vertices; ++u) {
            if (g.sides_[u] == Side::none) continue;
            for (VertexId v : g.neighbors(u))
                if (g.sides_[v] == g.sides_[u])
                    throw Error(ErrorKind::NotBipartite,
                                "edge (" + std::to_string(u) + "," + std::to_string(v) + ") joins same-side vertices");
        }
    }
    return g;
}

bool is_independent(const Graph& g, std::span<const VertexId> set) {
    std::vector<std::uint8_t> mark(g.num_vertices(), 0);
    for (VertexId v : set) {
        if (v >= g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
        mark[v] = 1;
    }
    for (VertexId v : set)
        for (VertexId w : g.neighbors(v))
            if (mark[w]) return false;
    return true;
}

bool has_valid_bipartition(const Graph& g) {
    if (!g.has_sides()) return false;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        if (g.side(u) == Side::none) return false;
        for (VertexId v : g.neighbors(u))
            if (g.side(v) == g.side(u)) return false;
    }
    return true;
}

bool is_forest(const Graph& g) {
    std::vector<VertexId> parent(g.num_vertices());
    std::iota(parent.begin(), parent.end(), VertexId{0});
    auto find = [&](VertexId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [u, v] : g.edges()) {
        const VertexId a = find(u), b = find(v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

std::vector<VertexId> IndependentSetState::members() const {
    std::vector<VertexId> out;
    out.reserve(size_);
    for (VertexId v = 0; v < occupied_.size(); ++v)
        if (occupied_[v]) out.push_back(v);
    return out;
}

void IndependentSetState::assign(std::span<const VertexId> set) {
    std::fill(occupied_.begin(), occupied_.end(), 0);
    size_ = 0;
    for (VertexId v : set) {
        if (!occupied_[v]) {
            occupied_[v] = 1;
            ++size_;
        }
    }
    max_size_ = size_;
}

bool state_is_independent(const Graph& g, const IndependentSetState& state) {
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        if (!state.contains(u)) continue;
        for (VertexId v : g.neighbors(u))
            if (state.contains(v)) return false;
    }
    return true;
}

}  // namespace annealbench
