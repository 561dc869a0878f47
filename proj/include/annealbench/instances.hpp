#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annealbench/graph.hpp"

namespace annealbench {

/// Parameters of the clique blowup: a random bipartite base B(n, kn, p)
/// whose left vertices are each replaced by an ell-clique.
struct BlowupParams {
    std::size_t n = 1;
    std::size_t k = 1;
    std::size_t ell = 1;
    double p = 0.05;
    std::uint64_t seed = 0;
};

struct RelationReport {
    bool p_lower_ok = false;  // p >= 50 ln(k) / n
    bool p_upper_ok = false;  // p <= 0.1
    bool ell_ok = false;      // ell >= 10 k p n
    double p_lower = 0.0;
    double ell_required = 0.0;
    std::vector<std::string> warnings;

    bool all_hold() const noexcept { return p_lower_ok && p_upper_ok && ell_ok; }
};

/// Checks the asymptotic parameter relations; violations are warnings.
RelationReport validate_relations(const BlowupParams& params);

struct DenseParams {
    double m = 0.0;
    double epsilon = 0.25;
    double delta = 0.2;
};

/// Integer parameters obtained from the dense parameterization together
/// with the exact reals they were rounded from (counts are floored).
struct DerivedDense {
    BlowupParams params;
    double n_exact = 0.0;
    double k_exact = 0.0;
    double ell_exact = 0.0;
    bool p_exceeds_bound = false;  // p > 0.1 at this m
};

/// n = m^eps, k = m^(1-3eps), ell = m^(1-eps), p = m^(-delta). Requires
/// eps in (0, 1/3) and eps/4 < delta < eps, else InvalidDenseParams.
DerivedDense derive_dense_params(const DenseParams& dense, std::uint64_t seed = 0);

/// Random bipartite B(n, kn, p): left = 0..n-1, right = n..n+kn-1.
Graph gen_base_bipartite(std::size_t n, std::size_t k, double p, std::uint64_t seed);

/// Layout of a clique blowup: clique K_u occupies u*ell .. u*ell+ell-1 and
/// right vertex r sits at n*ell + r.
struct CliqueMeta {
    std::size_t n = 0;
    std::size_t ell = 1;
    std::size_t num_right = 0;

    std::size_t num_vertices() const noexcept { return n * ell + num_right; }
    /// Base vertex of a blowup vertex.
    VertexId project(VertexId v) const noexcept {
        const std::size_t clique_end = n * ell;
        return static_cast<VertexId>(v < clique_end ? v / ell : v - clique_end + n);
    }
};

inline constexpr std::size_t kDefaultExplicitVertexLimit = 1'000'000;
inline constexpr std::size_t kDefaultExplicitEdgeLimit = 50'000'000;

/// Replaces every left vertex of `base` with an ell-clique joined to the
/// base neighborhood. Raises TooLarge when the result exceeds the limits;
/// such instances are simulated implicitly on the base graph.
Graph clique_blowup_of(const Graph& base, std::size_t ell, std::size_t vertex_limit = kDefaultExplicitVertexLimit,
                       std::size_t edge_limit = kDefaultExplicitEdgeLimit);

Graph gen_clique_blowup(const BlowupParams& params, std::size_t vertex_limit = kDefaultExplicitVertexLimit,
                        std::size_t edge_limit = kDefaultExplicitEdgeLimit);

CliqueMeta clique_meta(const Graph& base, std::size_t ell);

/// Cloud layout of the bipartite K,M blowup: cloud c = m * base_n + i holds
/// vertices c*K .. c*K+K-1.
struct CloudMeta {
    std::size_t K = 1;
    std::size_t M = 1;
    std::size_t base_vertices = 0;

    std::size_t num_clouds() const noexcept { return base_vertices * M; }
    std::size_t cloud_of(VertexId v) const noexcept { return v / K; }
    std::size_t copy_of_cloud(std::size_t c) const noexcept { return c / base_vertices; }
    VertexId base_of_cloud(std::size_t c) const noexcept { return static_cast<VertexId>(c % base_vertices); }
    std::vector<VertexId> members(std::size_t c) const;
};

struct CloudBlowup {
    Graph graph;
    CloudMeta meta;
};

/// M disjoint copies of `base`, each vertex replaced by a K-cloud and each
/// base edge by a complete K x K join. Requires a labeled bipartite base.
CloudBlowup gen_bipartite_blowup(const Graph& base, std::size_t K, std::size_t M);

/// T_k: root 0 (left), a_i = i (right) and leaf b_i = k + i (left), i = 1..k.
Graph gen_star_tree(std::size_t k);

/// `copies` disjoint T_k, copy c at offset c(2k+1). With an apex, one extra
/// vertex (last index) is joined to every copy root and the result is a tree.
Graph gen_hard_tree(std::size_t k, std::size_t copies, bool with_apex = true);

/// 2n vertices with independent fair sides; each cross pair is an edge with
/// probability d/n.
Graph gen_random_balanced_bipartite(std::size_t n, double d, std::uint64_t seed);

/// I = 0..n-1 (independent), C = n..2n-1 (clique), r = 2n; I x C complete,
/// r adjacent to all of I.
Graph gen_appendix_anchor(std::size_t n);

/// n copies of an independent set of size s = floor(n^eps) fully joined to
/// an n-clique. Copy c occupies c(n+s) .. c(n+s)+n+s-1, independent part first.
Graph gen_appendix_multicopy(std::size_t n, double epsilon);

std::size_t multicopy_part_size(std::size_t n, double epsilon);

/// Generator parameters as key/value text.
using ParamMap = std::map<std::string, std::string>;

/// An instance built by family name, with everything the harness needs.
struct Instance {
    std::string family;
    ParamMap params;
    std::uint64_t seed = 0;
    Graph graph;                          // empty when simulated implicitly
    Graph base;                           // base graph for blowup families
    std::optional<CliqueMeta> cliques;    // clique blowup layout
    std::optional<CloudMeta> clouds;      // bipartite blowup layout
    std::optional<std::size_t> formula_alpha;
    std::optional<RelationReport> relations;
    bool implicit = false;                // clique blowup run on its base

    const Graph& simulated_graph() const noexcept { return implicit ? base : graph; }
};

/// Families: base_bipartite(n,k,p), clique_blowup(n,k,ell,p[,implicit]),
/// bipartite_blowup(n,d,K,M), random_bipartite(n,d), star_tree(k),
/// hard_tree(k,copies[,apex]), forest(k,copies), anchor(n),
/// multicopy(n,eps), file(path). Unknown families or missing parameters
/// raise ConfigError.
Instance make_instance(const std::string& family, const ParamMap& params, std::uint64_t seed);

/// Sidecar metadata: "key = value" lines with family, parameters, seed,
/// sizes and the closed-form alpha when known.
std::string format_metadata(const Instance& inst);
void save_metadata(const std::string& path, const Instance& inst);

}  // namespace annealbench
