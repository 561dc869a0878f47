#include "annealbench/alpha.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>

#include "annealbench/dynamics.hpp"
#include "annealbench/errors.hpp"

namespace annealbench {

std::string_view to_string(AlphaMethod method) {
    switch (method) {
    case AlphaMethod::brute_force: return "brute_force";
    case AlphaMethod::bipartite_matching: return "bipartite_matching";
    case AlphaMethod::tree_dp: return "tree_dp";
    case AlphaMethod::lower_bound_only: return "lower_bound_only";
    }
    return "unknown";
}

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(unsigned v) { return Mask{1} << v; }

class BranchAndBound {
public:
    explicit BranchAndBound(const Graph& g) : adj_(g.num_vertices(), 0) {
        for (VertexId u = 0; u < g.num_vertices(); ++u)
            for (VertexId v : g.neighbors(u)) adj_[u] |= bit(v);
    }

    std::pair<std::size_t, Mask> solve() {
        const unsigned n = static_cast<unsigned>(adj_.size());
        const Mask all = n == 64 ? ~Mask{0} : bit(n) - 1;
        best_ = 0;
        best_set_ = 0;
        found_ = false;
        search(all, 0, 0);
        return {best_, best_set_};
    }

private:
    // Number of cliques in a greedy clique cover; an upper bound on alpha.
    std::size_t clique_cover_bound(Mask cand) const {
        std::size_t cliques = 0;
        while (cand) {
            const unsigned v = static_cast<unsigned>(std::countr_zero(cand));
            Mask clique = bit(v);
            Mask common = cand & adj_[v];
            while (common) {
                const unsigned w = static_cast<unsigned>(std::countr_zero(common));
                clique |= bit(w);
                common &= adj_[w];
            }
            cand &= ~clique;
            ++cliques;
        }
        return cliques;
    }

    void search(Mask cand, Mask chosen, std::size_t size) {
        // Isolated candidates belong to every maximum extension.
        for (;;) {
            Mask isolated = 0;
            for (Mask scan = cand; scan;) {
                const unsigned v = static_cast<unsigned>(std::countr_zero(scan));
                scan &= scan - 1;
                if ((adj_[v] & cand) == 0) isolated |= bit(v);
            }
            if (!isolated) break;
            chosen |= isolated;
            size += static_cast<std::size_t>(std::popcount(isolated));
            cand &= ~isolated;
        }
        // Include-first in index order visits maximum sets lexicographically,
        // so only a strict improvement replaces the incumbent.
        if (!cand) {
            if (!found_ || size > best_) {
                best_ = size;
                best_set_ = chosen;
                found_ = true;
            }
            return;
        }
        if (found_ && size + static_cast<std::size_t>(std::popcount(cand)) <= best_) return;
        if (found_ && size + clique_cover_bound(cand) <= best_) return;

        const unsigned v = static_cast<unsigned>(std::countr_zero(cand));
        search(cand & ~bit(v) & ~adj_[v], chosen | bit(v), size + 1);
        search(cand & ~bit(v), chosen, size);
    }

    std::vector<Mask> adj_;
    std::size_t best_ = 0;
    Mask best_set_ = 0;
    bool found_ = false;
};

}  // namespace

AlphaCertificate alpha_bruteforce(const Graph& g, std::size_t cap) {
    if (cap > 64) cap = 64;
    if (g.num_vertices() > cap)
        throw Error(ErrorKind::CapExceeded,
                    std::to_string(g.num_vertices()) + " vertices exceeds brute-force cap " + std::to_string(cap));
    AlphaCertificate cert;
    cert.method = AlphaMethod::brute_force;
    if (g.num_vertices() == 0) {
        cert.witness.emplace();
        return cert;
    }
    BranchAndBound bb(g);
    const auto [alpha, set] = bb.solve();
    cert.alpha = alpha;
    std::vector<VertexId> witness;
    for (Mask s = set; s; s &= s - 1) witness.push_back(static_cast<VertexId>(std::countr_zero(s)));
    cert.witness = std::move(witness);
    return cert;
}

namespace {

constexpr VertexId kNone = std::numeric_limits<VertexId>::max();

/// Hopcroft-Karp over a labeled bipartite graph; match_ holds the partner of
/// every vertex or kNone.
class HopcroftKarp {
public:
    explicit HopcroftKarp(const Graph& g) : g_(g), match_(g.num_vertices(), kNone), dist_(g.num_vertices()) {
        for (VertexId v = 0; v < g.num_vertices(); ++v)
            if (g.side(v) == Side::left) left_.push_back(v);
    }

    std::size_t run() {
        std::size_t matching = 0;
        while (bfs()) {
            for (VertexId u : left_)
                if (match_[u] == kNone && dfs(u)) ++matching;
        }
        return matching;
    }

    const std::vector<VertexId>& match() const { return match_; }
    const std::vector<VertexId>& left() const { return left_; }

private:
    static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<VertexId> q;
        bool found_free = false;
        for (VertexId u : left_) {
            if (match_[u] == kNone) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = kInf;
            }
        }
        while (!q.empty()) {
            const VertexId u = q.front();
            q.pop();
            for (VertexId r : g_.neighbors(u)) {
                const VertexId w = match_[r];
                if (w == kNone) {
                    found_free = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found_free;
    }

    // Iterative layered DFS to avoid deep recursion on long augmenting paths.
    bool dfs(VertexId root) {
        struct Frame {
            VertexId u;
            std::size_t next;
        };
        std::vector<Frame> stack{{root, 0}};
        std::vector<VertexId> via;  // right vertex used to descend from each frame
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto nb = g_.neighbors(f.u);
            bool descended = false;
            while (f.next < nb.size()) {
                const VertexId r = nb[f.next++];
                const VertexId w = match_[r];
                if (w == kNone) {
                    // Augment along the stack.
                    via.push_back(r);
                    for (std::size_t i = 0; i < stack.size(); ++i) {
                        const VertexId u = stack[i].u;
                        const VertexId rr = via[i];
                        match_[u] = rr;
                        match_[rr] = u;
                    }
                    return true;
                }
                if (dist_[w] == dist_[f.u] + 1) {
                    via.push_back(r);
                    stack.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                dist_[f.u] = kInf;
                stack.pop_back();
                if (!via.empty()) via.pop_back();
            }
        }
        return false;
    }

    const Graph& g_;
    std::vector<VertexId> match_;
    std::vector<std::size_t> dist_;
    std::vector<VertexId> left_;
};

}  // namespace

std::size_t maximum_matching_size(const Graph& g) {
    if (!has_valid_bipartition(g)) throw Error(ErrorKind::NotBipartite, "missing or invalid bipartition labels");
    HopcroftKarp hk(g);
    return hk.run();
}

AlphaCertificate alpha_bipartite(const Graph& g) {
    if (!has_valid_bipartition(g)) throw Error(ErrorKind::NotBipartite, "missing or invalid bipartition labels");
    HopcroftKarp hk(g);
    const std::size_t matching = hk.run();
    const auto& match = hk.match();

    // König: Z = vertices reachable from free left vertices by alternating
    // paths. Minimum cover = (L \ Z) ∪ (R ∩ Z); its complement is a maximum
    // independent set (L ∩ Z) ∪ (R \ Z).
    std::vector<std::uint8_t> reached(g.num_vertices(), 0);
    std::queue<VertexId> q;
    for (VertexId u : hk.left()) {
        if (match[u] == kNone) {
            reached[u] = 1;
            q.push(u);
        }
    }
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop();
        for (VertexId r : g.neighbors(u)) {
            if (reached[r] || match[u] == r) continue;
            reached[r] = 1;
            const VertexId w = match[r];
            if (w != kNone && !reached[w]) {
                reached[w] = 1;
                q.push(w);
            }
        }
    }
    std::vector<VertexId> witness;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const bool in_left = g.side(v) == Side::left;
        if (in_left == static_cast<bool>(reached[v])) witness.push_back(v);
    }
    AlphaCertificate cert;
    cert.alpha = g.num_vertices() - matching;
    cert.method = AlphaMethod::bipartite_matching;
    cert.witness = std::move(witness);
    return cert;
}

AlphaCertificate alpha_tree(const Graph& g) {
    if (!is_forest(g)) throw Error(ErrorKind::NotAForest, "graph contains a cycle");
    const std::size_t n = g.num_vertices();
    std::vector<VertexId> parent(n, kNone);
    std::vector<VertexId> order;
    order.reserve(n);
    std::vector<std::uint8_t> seen(n, 0);
    for (VertexId root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::size_t head = order.size();
        order.push_back(root);
        while (head < order.size()) {
            const VertexId u = order[head++];
            for (VertexId w : g.neighbors(u)) {
                if (seen[w]) continue;
                seen[w] = 1;
                parent[w] = u;
                order.push_back(w);
            }
        }
    }
    // in_[v]: best in subtree with v taken; out_[v]: with v not taken.
    std::vector<std::size_t> in_(n, 1), out_(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        const VertexId p = parent[v];
        if (p == kNone) continue;
        in_[p] += out_[v];
        out_[p] += std::max(in_[v], out_[v]);
    }
    std::vector<std::uint8_t> taken(n, 0);
    std::size_t alpha = 0;
    for (VertexId v : order) {
        const VertexId p = parent[v];
        if (p == kNone) {
            taken[v] = in_[v] >= out_[v];
            alpha += std::max(in_[v], out_[v]);
        } else {
            taken[v] = !taken[p] && in_[v] >= out_[v];
        }
    }
    AlphaCertificate cert;
    cert.alpha = alpha;
    cert.method = AlphaMethod::tree_dp;
    std::vector<VertexId> witness;
    for (VertexId v = 0; v < n; ++v)
        if (taken[v]) witness.push_back(v);
    cert.witness = std::move(witness);
    return cert;
}

AlphaCertificate alpha_auto(const Graph& g) {
    if (is_forest(g)) return alpha_tree(g);
    if (has_valid_bipartition(g)) return alpha_bipartite(g);
    if (g.num_vertices() <= kBruteForceCap) return alpha_bruteforce(g);
    AlphaCertificate cert;
    auto set = run_degree_greedy(g);
    cert.alpha = set.size();
    cert.witness = std::move(set);
    cert.method = AlphaMethod::lower_bound_only;
    return cert;
}

}  // namespace annealbench
