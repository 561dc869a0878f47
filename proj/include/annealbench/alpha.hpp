#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "annealbench/graph.hpp"

namespace annealbench {

enum class AlphaMethod { brute_force, bipartite_matching, tree_dp, lower_bound_only };

std::string_view to_string(AlphaMethod method);

/// Independence number with an optional witness set (sorted ascending).
struct AlphaCertificate {
    std::size_t alpha = 0;
    std::optional<std::vector<VertexId>> witness;
    AlphaMethod method = AlphaMethod::lower_bound_only;
};

inline constexpr std::size_t kBruteForceCap = 32;

/// Exact alpha by branch-and-bound over vertices in index order with a greedy
/// clique-cover bound. The witness is the lexicographically smallest maximum
/// independent set. Raises CapExceeded above `cap` vertices (cap <= 64).
AlphaCertificate alpha_bruteforce(const Graph& g, std::size_t cap = kBruteForceCap);

/// Exact alpha of a bipartite graph: |V| minus a maximum matching
/// (Hopcroft-Karp); the witness is the complement of the König cover.
/// Requires side labels forming a valid bipartition, else NotBipartite.
AlphaCertificate alpha_bipartite(const Graph& g);

/// Maximum matching size of a labeled bipartite graph.
std::size_t maximum_matching_size(const Graph& g);

/// Exact alpha of a forest by two-state leaf-to-root DP. Raises NotAForest.
AlphaCertificate alpha_tree(const Graph& g);

/// Picks the cheapest exact oracle that applies (tree, bipartite, brute
/// force); otherwise returns the minimum-degree greedy set as a lower bound
/// with method lower_bound_only.
AlphaCertificate alpha_auto(const Graph& g);

}  // namespace annealbench
