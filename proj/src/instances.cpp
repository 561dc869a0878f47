#include "annealbench/instances.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "annealbench/alpha.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

RelationReport validate_relations(const BlowupParams& params) {
    RelationReport r;
    const double n = static_cast<double>(params.n);
    const double k = static_cast<double>(params.k);
    r.p_lower = 50.0 * std::log(k) / n;
    r.ell_required = 10.0 * k * params.p * n;
    r.p_lower_ok = params.p >= r.p_lower;
    r.p_upper_ok = params.p <= 0.1;
    r.ell_ok = static_cast<double>(params.ell) >= r.ell_required;
    if (!r.p_lower_ok) r.warnings.push_back(fmt::format("p = {} < 50 ln(k)/n = {:.6g}", params.p, r.p_lower));
    if (!r.p_upper_ok) r.warnings.push_back(fmt::format("p = {} > 0.1", params.p));
    if (!r.ell_ok) r.warnings.push_back(fmt::format("ell = {} < 10kpn = {:.6g}", params.ell, r.ell_required));
    return r;
}

DerivedDense derive_dense_params(const DenseParams& d, std::uint64_t seed) {
    if (!(d.epsilon > 0.0 && d.epsilon < 1.0 / 3.0))
        throw Error(ErrorKind::InvalidDenseParams, fmt::format("epsilon = {} outside (0, 1/3)", d.epsilon));
    if (!(d.delta > d.epsilon / 4.0 && d.delta < d.epsilon))
        throw Error(ErrorKind::InvalidDenseParams,
                    fmt::format("delta = {} outside (epsilon/4, epsilon) = ({}, {})", d.delta, d.epsilon / 4.0, d.epsilon));
    if (!(d.m >= 1.0)) throw Error(ErrorKind::InvalidDenseParams, fmt::format("m = {} must be at least 1", d.m));

    DerivedDense out;
    out.n_exact = std::pow(d.m, d.epsilon);
    out.k_exact = std::pow(d.m, 1.0 - 3.0 * d.epsilon);
    out.ell_exact = std::pow(d.m, 1.0 - d.epsilon);
    // The tolerance keeps exact powers such as 4096^(1/4) = 8 from flooring to 7.
    auto floor_count = [](double x) { return static_cast<std::size_t>(std::max(1.0, std::floor(x + 1e-9))); };
    out.params.n = floor_count(out.n_exact);
    out.params.k = floor_count(out.k_exact);
    out.params.ell = floor_count(out.ell_exact);
    out.params.p = std::pow(d.m, -d.delta);
    out.params.seed = seed;
    out.p_exceeds_bound = out.params.p > 0.1;
    return out;
}

namespace {

/// Calls emit(i) for each index of [0, total) kept independently with
/// probability p, skipping geometrically between kept indices.
template <typename Emit>
void sample_indices(std::uint64_t total, double p, StreamRng& rng, Emit&& emit) {
    if (total == 0 || !(p > 0.0)) return;
    if (p >= 1.0) {
        for (std::uint64_t i = 0; i < total; ++i) emit(i);
        return;
    }
    std::uint64_t i = rng.geometric_gap(p);
    while (i < total) {
        emit(i);
        const std::uint64_t gap = rng.geometric_gap(p);
        if (gap >= total - i - 1) break;
        i += gap + 1;
    }
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, fmt::format("edge probability {} outside [0, 1]", p));
}

}  // namespace

Graph gen_base_bipartite(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
    if (n == 0 || k == 0) throw Error(ErrorKind::InvalidArgument, "n and k must be at least 1");
    require_probability(p);
    const std::size_t right = k * n;
    VertexLabels labels;
    labels.sides.assign(n + right, Side::right);
    std::fill(labels.sides.begin(), labels.sides.begin() + static_cast<std::ptrdiff_t>(n), Side::left);
    std::vector<Edge> edges;
    StreamRng rng(seed, streams::kBaseEdges);
    sample_indices(static_cast<std::uint64_t>(n) * right, p, rng, [&](std::uint64_t idx) {
        edges.emplace_back(static_cast<VertexId>(idx / right), static_cast<VertexId>(n + idx % right));
    });
    return build_graph(n + right, edges, std::move(labels), GraphKind::base_bipartite);
}

CliqueMeta clique_meta(const Graph& base, std::size_t ell) {
    CliqueMeta meta;
    meta.ell = ell;
    for (VertexId v = 0; v < base.num_vertices(); ++v) {
        if (base.side(v) == Side::left) ++meta.n;
        else ++meta.num_right;
    }
    return meta;
}

Graph clique_blowup_of(const Graph& base, std::size_t ell, std::size_t vertex_limit, std::size_t edge_limit) {
    if (ell == 0) throw Error(ErrorKind::InvalidArgument, "clique size must be at least 1");
    if (!has_valid_bipartition(base)) throw Error(ErrorKind::NotBipartite, "clique blowup needs a labeled bipartite base");
    const CliqueMeta meta = clique_meta(base, ell);
    // Layout assumes left vertices precede right vertices.
    for (VertexId v = 0; v < base.num_vertices(); ++v)
        if ((v < meta.n) != (base.side(v) == Side::left))
            throw Error(ErrorKind::InvalidArgument, "clique blowup base must list left vertices first");

    const std::size_t total = meta.num_vertices();
    const long double edge_count = static_cast<long double>(meta.n) * ell * (ell - 1) / 2 +
                                   static_cast<long double>(base.num_edges()) * ell;
    if (total > vertex_limit || edge_count > static_cast<long double>(edge_limit))
        throw Error(ErrorKind::TooLarge, fmt::format("clique blowup with {} vertices and {:.0f} edges exceeds explicit limits",
                                                     total, static_cast<double>(edge_count)));

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(edge_count));
    for (std::size_t u = 0; u < meta.n; ++u) {
        const VertexId first = static_cast<VertexId>(u * ell);
        for (std::size_t i = 0; i < ell; ++i)
            for (std::size_t j = i + 1; j < ell; ++j)
                edges.emplace_back(static_cast<VertexId>(first + i), static_cast<VertexId>(first + j));
        for (VertexId r : base.neighbors(static_cast<VertexId>(u))) {
            const VertexId target = static_cast<VertexId>(meta.n * ell + (r - meta.n));
            for (std::size_t i = 0; i < ell; ++i) edges.emplace_back(static_cast<VertexId>(first + i), target);
        }
    }
    VertexLabels labels;
    labels.sides.assign(total, Side::right);
    labels.groups.assign(total, kNoGroup);
    for (std::size_t v = 0; v < meta.n * ell; ++v) {
        labels.sides[v] = Side::left;
        labels.groups[v] = static_cast<std::int64_t>(v / ell);
    }
    return build_graph(total, edges, std::move(labels), GraphKind::clique_blowup);
}

Graph gen_clique_blowup(const BlowupParams& params, std::size_t vertex_limit, std::size_t edge_limit) {
    const Graph base = gen_base_bipartite(params.n, params.k, params.p, params.seed);
    return clique_blowup_of(base, params.ell, vertex_limit, edge_limit);
}

std::vector<VertexId> CloudMeta::members(std::size_t c) const {
    std::vector<VertexId> out(K);
    for (std::size_t j = 0; j < K; ++j) out[j] = static_cast<VertexId>(c * K + j);
    return out;
}

CloudBlowup gen_bipartite_blowup(const Graph& base, std::size_t K, std::size_t M) {
    if (K == 0 || M == 0) throw Error(ErrorKind::InvalidArgument, "K and M must be at least 1");
    if (!has_valid_bipartition(base)) throw Error(ErrorKind::NotBipartite, "bipartite blowup needs a labeled bipartite base");
    const std::size_t nb = base.num_vertices();
    const std::size_t total = nb * K * M;
    if (total > std::numeric_limits<VertexId>::max()) throw Error(ErrorKind::TooLarge, "blowup exceeds 32-bit ids");
    CloudMeta meta{K, M, nb};
    const auto base_edges = base.edges();
    std::vector<Edge> edges;
    edges.reserve(base_edges.size() * K * K * M);
    for (std::size_t m = 0; m < M; ++m) {
        for (const auto& [u, v] : base_edges) {
            const std::size_t cu = (m * nb + u) * K, cv = (m * nb + v) * K;
            for (std::size_t a = 0; a < K; ++a)
                for (std::size_t b = 0; b < K; ++b)
                    edges.emplace_back(static_cast<VertexId>(cu + a), static_cast<VertexId>(cv + b));
        }
    }
    VertexLabels labels;
    labels.sides.resize(total);
    labels.groups.resize(total);
    for (std::size_t id = 0; id < total; ++id) {
        const std::size_t cloud = id / K;
        labels.sides[id] = base.side(meta.base_of_cloud(cloud));
        labels.groups[id] = static_cast<std::int64_t>(cloud);
    }
    return {build_graph(total, edges, std::move(labels), GraphKind::bipartite_blowup), meta};
}

namespace {

void append_star(std::vector<Edge>& edges, std::vector<Side>& sides, std::size_t k, std::size_t offset) {
    sides[offset] = Side::left;
    for (std::size_t i = 1; i <= k; ++i) {
        sides[offset + i] = Side::right;
        sides[offset + k + i] = Side::left;
        edges.emplace_back(static_cast<VertexId>(offset), static_cast<VertexId>(offset + i));
        edges.emplace_back(static_cast<VertexId>(offset + i), static_cast<VertexId>(offset + k + i));
    }
}

}  // namespace

Graph gen_star_tree(std::size_t k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
    VertexLabels labels;
    labels.sides.resize(2 * k + 1);
    std::vector<Edge> edges;
    append_star(edges, labels.sides, k, 0);
    return build_graph(2 * k + 1, edges, std::move(labels), GraphKind::star_tree);
}

Graph gen_hard_tree(std::size_t k, std::size_t copies, bool with_apex) {
    if (k == 0 || copies == 0) throw Error(ErrorKind::InvalidArgument, "k and copies must be at least 1");
    const std::size_t block = 2 * k + 1;
    const std::size_t total = copies * block + (with_apex ? 1 : 0);
    VertexLabels labels;
    labels.sides.resize(total);
    labels.groups.assign(total, kNoGroup);
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < copies; ++c) {
        append_star(edges, labels.sides, k, c * block);
        for (std::size_t j = 0; j < block; ++j) labels.groups[c * block + j] = static_cast<std::int64_t>(c);
    }
    if (with_apex) {
        const VertexId apex = static_cast<VertexId>(copies * block);
        labels.sides[apex] = Side::right;
        for (std::size_t c = 0; c < copies; ++c) edges.emplace_back(static_cast<VertexId>(c * block), apex);
    }
    return build_graph(total, edges, std::move(labels), with_apex ? GraphKind::hard_tree : GraphKind::forest);
}

Graph gen_random_balanced_bipartite(std::size_t n, double d, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
    if (!(d >= 0.0) || d > static_cast<double>(n))
        throw Error(ErrorKind::InvalidArgument, fmt::format("average degree d = {} outside [0, n]", d));
    const std::size_t total = 2 * n;
    VertexLabels labels;
    labels.sides.resize(total);
    std::vector<VertexId> left, right;
    StreamRng side_rng(seed, streams::kSides);
    for (std::size_t v = 0; v < total; ++v) {
        const bool is_left = side_rng.bernoulli(0.5);
        labels.sides[v] = is_left ? Side::left : Side::right;
        (is_left ? left : right).push_back(static_cast<VertexId>(v));
    }
    std::vector<Edge> edges;
    if (!left.empty() && !right.empty()) {
        StreamRng edge_rng(seed, streams::kCrossEdges);
        const std::uint64_t width = right.size();
        sample_indices(static_cast<std::uint64_t>(left.size()) * width, d / static_cast<double>(n), edge_rng,
                       [&](std::uint64_t idx) { edges.emplace_back(left[idx / width], right[idx % width]); });
    }
    return build_graph(total, edges, std::move(labels), GraphKind::random_bipartite);
}

Graph gen_appendix_anchor(std::size_t n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "anchor instance needs n >= 2");
    std::vector<Edge> edges;
    edges.reserve(n * n + n * (n - 1) / 2 + n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = n; c < 2 * n; ++c) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(c));
    for (std::size_t a = n; a < 2 * n; ++a)
        for (std::size_t b = a + 1; b < 2 * n; ++b) edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(2 * n));
    return build_graph(2 * n + 1, edges, {}, GraphKind::anchor);
}

std::size_t multicopy_part_size(std::size_t n, double epsilon) {
    const double s = std::floor(std::pow(static_cast<double>(n), epsilon) + 1e-9);
    if (!(s >= 1.0)) throw Error(ErrorKind::InvalidArgument, "n^eps must be at least 1");
    return static_cast<std::size_t>(s);
}

Graph gen_appendix_multicopy(std::size_t n, double epsilon) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
    const std::size_t s = multicopy_part_size(n, epsilon);
    const std::size_t block = n + s;
    std::vector<Edge> edges;
    edges.reserve(n * (s * n + n * (n - 1) / 2));
    VertexLabels labels;
    labels.groups.resize(n * block);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t base = c * block;
        for (std::size_t j = 0; j < block; ++j) labels.groups[base + j] = static_cast<std::int64_t>(c);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t q = s; q < block; ++q)
                edges.emplace_back(static_cast<VertexId>(base + i), static_cast<VertexId>(base + q));
        for (std::size_t a = s; a < block; ++a)
            for (std::size_t b = a + 1; b < block; ++b)
                edges.emplace_back(static_cast<VertexId>(base + a), static_cast<VertexId>(base + b));
    }
    return build_graph(n * block, edges, std::move(labels), GraphKind::multicopy);
}

namespace {

const std::string& require(const ParamMap& params, const std::string& key, const std::string& family) {
    const auto it = params.find(key);
    if (it == params.end()) throw Error(ErrorKind::ConfigError, fmt::format("family '{}' needs parameter '{}'", family, key));
    return it->second;
}

std::size_t get_count(const ParamMap& params, const std::string& key, const std::string& family) {
    const std::string& text = require(params, key, family);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::ConfigError, fmt::format("parameter {} = '{}' is not a count", key, text));
    return value;
}

double get_real(const ParamMap& params, const std::string& key, const std::string& family) {
    const std::string& text = require(params, key, family);
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
        throw Error(ErrorKind::ConfigError, fmt::format("parameter {} = '{}' is not a number", key, text));
    return value;
}

bool get_flag(const ParamMap& params, const std::string& key, bool fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw Error(ErrorKind::ConfigError, fmt::format("parameter {} = '{}' is not a boolean", key, it->second));
}

}  // namespace

Instance make_instance(const std::string& family, const ParamMap& params, std::uint64_t seed) {
    Instance inst;
    inst.family = family;
    inst.params = params;
    inst.seed = seed;
    if (family == "base_bipartite") {
        const auto n = get_count(params, "n", family), k = get_count(params, "k", family);
        inst.graph = gen_base_bipartite(n, k, get_real(params, "p", family), seed);
    } else if (family == "clique_blowup") {
        BlowupParams bp;
        bp.n = get_count(params, "n", family);
        bp.k = get_count(params, "k", family);
        bp.ell = get_count(params, "ell", family);
        bp.p = get_real(params, "p", family);
        bp.seed = seed;
        inst.relations = validate_relations(bp);
        inst.base = gen_base_bipartite(bp.n, bp.k, bp.p, seed);
        inst.cliques = clique_meta(inst.base, bp.ell);
        inst.implicit = get_flag(params, "implicit", false);
        if (!inst.implicit) {
            try {
                inst.graph = clique_blowup_of(inst.base, bp.ell);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::TooLarge) throw;
                inst.implicit = true;
            }
        }
        inst.formula_alpha = alpha_bipartite(inst.base).alpha;
    } else if (family == "bipartite_blowup") {
        const auto n = get_count(params, "n", family);
        inst.base = gen_random_balanced_bipartite(n, get_real(params, "d", family), seed);
        auto blown = gen_bipartite_blowup(inst.base, get_count(params, "K", family), get_count(params, "M", family));
        inst.graph = std::move(blown.graph);
        inst.clouds = blown.meta;
        inst.formula_alpha = alpha_bipartite(inst.base).alpha * blown.meta.K * blown.meta.M;
    } else if (family == "random_bipartite") {
        inst.graph = gen_random_balanced_bipartite(get_count(params, "n", family), get_real(params, "d", family), seed);
    } else if (family == "star_tree") {
        const auto k = get_count(params, "k", family);
        inst.graph = gen_star_tree(k);
        inst.formula_alpha = k + 1;
    } else if (family == "hard_tree" || family == "forest") {
        const auto k = get_count(params, "k", family), copies = get_count(params, "copies", family);
        inst.graph = gen_hard_tree(k, copies, family == "hard_tree" && get_flag(params, "apex", true));
        inst.formula_alpha = copies * (k + 1);
    } else if (family == "anchor") {
        const auto n = get_count(params, "n", family);
        inst.graph = gen_appendix_anchor(n);
        inst.formula_alpha = n;
    } else if (family == "multicopy") {
        const auto n = get_count(params, "n", family);
        const double eps = get_real(params, "eps", family);
        inst.graph = gen_appendix_multicopy(n, eps);
        inst.formula_alpha = n * multicopy_part_size(n, eps);
    } else if (family == "file") {
        inst.graph = load_graph(require(params, "path", family));
    } else {
        throw Error(ErrorKind::ConfigError, fmt::format("unknown instance family '{}'", family));
    }
    return inst;
}

std::string format_metadata(const Instance& inst) {
    std::ostringstream out;
    out << "family = " << inst.family << '\n';
    for (const auto& [key, value] : inst.params) out << "param." << key << " = " << value << '\n';
    out << "seed = " << inst.seed << '\n';
    const Graph& g = inst.simulated_graph();
    out << "num_vertices = " << (inst.implicit ? inst.cliques->num_vertices() : g.num_vertices()) << '\n';
    if (!inst.implicit) out << "num_edges = " << g.num_edges() << '\n';
    out << "implicit = " << (inst.implicit ? "true" : "false") << '\n';
    if (inst.formula_alpha) out << "formula_alpha = " << *inst.formula_alpha << '\n';
    if (inst.cliques) {
        out << "clique.n = " << inst.cliques->n << '\n';
        out << "clique.ell = " << inst.cliques->ell << '\n';
        out << "clique.num_right = " << inst.cliques->num_right << '\n';
    }
    if (inst.clouds) {
        out << "cloud.K = " << inst.clouds->K << '\n';
        out << "cloud.M = " << inst.clouds->M << '\n';
        out << "cloud.base_vertices = " << inst.clouds->base_vertices << '\n';
    }
    if (inst.relations) {
        out << "relations.p_lower_ok = " << (inst.relations->p_lower_ok ? "true" : "false") << '\n';
        out << "relations.p_upper_ok = " << (inst.relations->p_upper_ok ? "true" : "false") << '\n';
        out << "relations.ell_ok = " << (inst.relations->ell_ok ? "true" : "false") << '\n';
    }
    return out.str();
}

void save_metadata(const std::string& path, const Instance& inst) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", path));
    out << format_metadata(inst);
    if (!out) throw Error(ErrorKind::IoError, fmt::format("write failed for '{}'", path));
}

}  // namespace annealbench
