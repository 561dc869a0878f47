#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library beyond constructing graphs, so a bug
// in the code under test cannot leak into the expected values.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "annealbench/graph.hpp"

namespace testsupport {

namespace ab = annealbench;

inline ab::Graph make_graph(std::size_t n, std::vector<ab::Edge> edges, ab::VertexLabels labels = {},
                            ab::GraphKind kind = ab::GraphKind::generic) {
    return ab::build_graph(n, edges, std::move(labels), kind);
}

inline ab::Graph path(std::size_t n) {
    std::vector<ab::Edge> e;
    for (ab::VertexId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return make_graph(n, e);
}

inline ab::Graph cycle(std::size_t n) {
    std::vector<ab::Edge> e;
    for (ab::VertexId v = 0; v < n; ++v) e.emplace_back(v, static_cast<ab::VertexId>((v + 1) % n));
    return make_graph(n, e);
}

inline ab::Graph clique(std::size_t n) {
    std::vector<ab::Edge> e;
    for (ab::VertexId u = 0; u < n; ++u)
        for (ab::VertexId v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return make_graph(n, e);
}

/// K_{a,b} with left 0..a-1 and right a..a+b-1, labeled.
inline ab::Graph complete_bipartite(std::size_t a, std::size_t b) {
    std::vector<ab::Edge> e;
    ab::VertexLabels labels;
    for (std::size_t v = 0; v < a + b; ++v) labels.sides.push_back(v < a ? ab::Side::left : ab::Side::right);
    for (ab::VertexId u = 0; u < a; ++u)
        for (std::size_t v = a; v < a + b; ++v) e.emplace_back(u, static_cast<ab::VertexId>(v));
    return make_graph(a + b, e, labels);
}

/// Adjacency masks for graphs of at most 64 vertices.
inline std::vector<std::uint64_t> adjacency_masks(const ab::Graph& g) {
    if (g.num_vertices() > 64) throw std::invalid_argument("mask oracle limited to 64 vertices");
    std::vector<std::uint64_t> adj(g.num_vertices(), 0);
    for (const auto& [u, v] : g.edges()) {
        adj[u] |= std::uint64_t{1} << v;
        adj[v] |= std::uint64_t{1} << u;
    }
    return adj;
}

inline bool mask_independent(const std::vector<std::uint64_t>& adj, std::uint64_t mask) {
    for (std::uint64_t m = mask; m; m &= m - 1)
        if (adj[static_cast<std::size_t>(std::countr_zero(m))] & mask) return false;
    return true;
}

/// Every independent set as a bit mask, by plain enumeration of 2^n subsets.
inline std::vector<std::uint64_t> all_independent_sets(const ab::Graph& g) {
    const std::size_t n = g.num_vertices();
    if (n > 26) throw std::invalid_argument("enumeration limited to 26 vertices");
    const auto adj = adjacency_masks(g);
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (mask_independent(adj, m)) out.push_back(m);
    return out;
}

inline std::size_t enumerate_alpha(const ab::Graph& g) {
    std::size_t best = 0;
    for (auto m : all_independent_sets(g)) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(m)));
    return best;
}

/// Number of maximum independent sets.
inline std::size_t count_maximum_sets(const ab::Graph& g) {
    const std::size_t alpha = enumerate_alpha(g);
    std::size_t count = 0;
    for (auto m : all_independent_sets(g)) count += static_cast<std::size_t>(std::popcount(m)) == alpha;
    return count;
}

inline std::uint64_t to_mask(std::span<const ab::VertexId> set) {
    std::uint64_t m = 0;
    for (auto v : set) m |= std::uint64_t{1} << v;
    return m;
}

/// Hard-core law lambda^|I| / Z over independent sets, keyed by mask.
inline std::map<std::uint64_t, double> hardcore_law(const ab::Graph& g, double lambda) {
    std::map<std::uint64_t, double> law;
    double z = 0.0;
    for (auto m : all_independent_sets(g)) {
        const double w = std::pow(lambda, std::popcount(m));
        law[m] = w;
        z += w;
    }
    for (auto& [m, w] : law) w /= z;
    return law;
}

/// Total variation between two laws over the same keys (missing keys are 0).
template <typename Key>
double tv_distance(const std::map<Key, double>& a, const std::map<Key, double>& b) {
    double s = 0.0;
    for (const auto& [k, p] : a) {
        const auto it = b.find(k);
        s += std::abs(p - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [k, q] : b)
        if (!a.count(k)) s += q;
    return s / 2.0;
}

template <typename Key>
std::map<Key, double> normalize_counts(const std::map<Key, std::uint64_t>& counts) {
    double total = 0.0;
    for (const auto& [k, c] : counts) total += static_cast<double>(c);
    std::map<Key, double> law;
    for (const auto& [k, c] : counts) law[k] = static_cast<double>(c) / total;
    return law;
}

/// Stationary vector of a row-stochastic matrix by Gaussian elimination on
/// (P^T - I) pi = 0 with the normalization row replacing the last equation.
inline std::vector<double> solve_stationary(const std::vector<std::vector<double>>& P) {
    const std::size_t n = P.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = 1.0;
    A[n - 1][n] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = A[i][n] / A[i][i];
    return pi;
}

/// Monte Carlo estimate of the probability that a walk with up-probability
/// p_up ever drops m below its start. Walks are absorbed at -m or at +cap;
/// returns (hits, walks). Uses its own generator.
struct RuinEstimate {
    std::uint64_t hits = 0;
    std::uint64_t walks = 0;
};

inline RuinEstimate simulate_ruin(double p_up, int m, int cap, std::uint64_t walks, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::bernoulli_distribution up(p_up);
    RuinEstimate est{0, walks};
    for (std::uint64_t w = 0; w < walks; ++w) {
        int pos = 0;
        while (pos > -m && pos < cap) pos += up(gen) ? 1 : -1;
        est.hits += pos == -m;
    }
    return est;
}

/// Exact hitting probability of -m before +cap for the same walk
/// (gambler's ruin on a finite interval), r = p_down / p_up.
inline double ruin_with_cap(double p_up, int m, int cap) {
    const double r = (1.0 - p_up) / p_up;
    const double total = static_cast<double>(m + cap);
    // Probability of reaching +cap first from distance m above the lower barrier.
    const double win = (1.0 - std::pow(r, m)) / (1.0 - std::pow(r, total));
    return 1.0 - win;
}

}  // namespace testsupport
