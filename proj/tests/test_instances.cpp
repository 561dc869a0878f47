#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "annealbench/alpha.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/instances.hpp"
#include "support.hpp"

namespace ab = annealbench;
namespace ts = testsupport;

TEST_CASE("gen_base_bipartite: p = 1 and p = 0") {
    const auto full = ab::gen_base_bipartite(4, 2, 1.0, 3);
    CHECK(full.num_vertices() == 12);
    CHECK(full.num_edges() == 32);
    CHECK(ab::has_valid_bipartition(full));
    const auto empty = ab::gen_base_bipartite(4, 2, 0.0, 3);
    CHECK(empty.num_edges() == 0);
    CHECK(empty.has_sides());
    for (ab::VertexId v = 0; v < 12; ++v) CHECK(empty.side(v) == (v < 4 ? ab::Side::left : ab::Side::right));
}

TEST_CASE("gen_base_bipartite: edge count concentrates") {
    const auto g = ab::gen_base_bipartite(100, 3, 0.05, 99);
    const double mean = 0.05 * 100 * 300, sd = std::sqrt(mean * 0.95);
    CHECK(std::abs(static_cast<double>(g.num_edges()) - mean) <= 4 * sd);
    // Each left/right pair should be an edge with the same frequency: split
    // the pairs in half by right index and compare the halves.
    std::size_t low = 0;
    for (const auto& [u, v] : g.edges()) low += v < 100 + 150;
    CHECK(std::abs(static_cast<double>(low) - mean / 2) <= 4 * std::sqrt(mean / 2));
}

TEST_CASE("generators are pure functions of parameters and seed") {
    CHECK(ab::format_graph(ab::gen_base_bipartite(30, 2, 0.1, 5)) == ab::format_graph(ab::gen_base_bipartite(30, 2, 0.1, 5)));
    CHECK(ab::format_graph(ab::gen_base_bipartite(30, 2, 0.1, 5)) != ab::format_graph(ab::gen_base_bipartite(30, 2, 0.1, 6)));
    CHECK(ab::format_graph(ab::gen_random_balanced_bipartite(50, 4, 1)) ==
          ab::format_graph(ab::gen_random_balanced_bipartite(50, 4, 1)));
}

TEST_CASE("gen_clique_blowup: vertex count N = kn + ell n") {
    ab::BlowupParams p{10, 2, 5, 0.05, 1};
    const auto g = ab::gen_clique_blowup(p);
    CHECK(g.num_vertices() == 70);
    // Every clique is complete and fully joined to its base neighborhood.
    const auto base = ab::gen_base_bipartite(10, 2, 0.05, 1);
    const auto meta = ab::clique_meta(base, 5);
    for (ab::VertexId v = 0; v < 50; ++v) {
        CHECK(g.group(v) == static_cast<std::int64_t>(v / 5));
        CHECK(g.degree(v) == 4 + base.degree(meta.project(v)));
    }
    for (ab::VertexId r = 50; r < 70; ++r) {
        CHECK(g.degree(r) == 5 * base.degree(meta.project(r)));
        for (auto u : g.neighbors(r)) CHECK(u < 50);
    }
}

TEST_CASE("gen_clique_blowup: p = 0 with ell = 1 is edgeless") {
    const auto g = ab::gen_clique_blowup({3, 1, 1, 0.0, 4});
    CHECK(g.num_vertices() == 6);
    CHECK(g.num_edges() == 0);
    CHECK(ab::alpha_bruteforce(g).alpha == 6);
}

TEST_CASE("gen_clique_blowup: alpha at least kn by enumeration") {
    const auto g = ab::gen_clique_blowup({4, 2, 3, 0.5, 11});
    CHECK(g.num_vertices() == 20);
    CHECK(ts::enumerate_alpha(g) >= 8);
    CHECK(ab::alpha_bruteforce(g).alpha == ts::enumerate_alpha(g));
}

TEST_CASE("clique_blowup_of: oversized instances raise TooLarge") {
    const auto base = ab::gen_base_bipartite(500, 10, 0.02, 1);
    try {
        ab::clique_blowup_of(base, 1000);
        FAIL("expected TooLarge");
    } catch (const ab::Error& e) {
        CHECK(e.kind() == ab::ErrorKind::TooLarge);
    }
}

TEST_CASE("validate_relations: worked cases") {
    const auto ok = ab::validate_relations({2000, 8, 8320, 0.052, 0});
    // 50 ln 8 / 2000 = 0.05199; 10*8*0.052*2000 = 8320.
    CHECK(ok.p_lower == doctest::Approx(50 * std::log(8.0) / 2000));
    CHECK(ok.ell_required == doctest::Approx(8320));
    CHECK(ok.all_hold());
    CHECK(ok.warnings.empty());

    const auto short_ell = ab::validate_relations({100, 8, 10, 0.02, 0});
    CHECK_FALSE(short_ell.ell_ok);
    CHECK(short_ell.ell_required == doctest::Approx(160));
    CHECK_FALSE(short_ell.warnings.empty());

    const auto big_p = ab::validate_relations({10, 2, 100, 0.2, 0});
    CHECK_FALSE(big_p.p_upper_ok);
    CHECK(big_p.ell_ok);
}

TEST_CASE("derive_dense_params: m = 4096") {
    const auto d = ab::derive_dense_params({4096, 0.25, 0.2});
    CHECK(d.params.n == 8);
    CHECK(d.params.k == 8);
    CHECK(d.params.ell == 512);
    CHECK(d.params.p == doctest::Approx(std::pow(4096.0, -0.2)));
    CHECK(d.params.p == doctest::Approx(0.189).epsilon(0.01));
    CHECK(d.p_exceeds_bound);
}

TEST_CASE("derive_dense_params: m = 10^6") {
    const auto d = ab::derive_dense_params({1e6, 0.25, 0.2});
    // 10^1.5 = 31.62, 10^4.5 = 31622.8, both floored.
    CHECK(d.n_exact == doctest::Approx(std::pow(10.0, 1.5)));
    CHECK(d.params.n == 31);
    CHECK(d.params.k == 31);
    CHECK(d.params.ell == 31622);
    CHECK(d.ell_exact == doctest::Approx(31622.78).epsilon(1e-6));
    CHECK(d.params.p == doctest::Approx(0.0631).epsilon(0.001));
    CHECK_FALSE(d.p_exceeds_bound);
}

TEST_CASE("derive_dense_params: preconditions") {
    for (const ab::DenseParams bad : {ab::DenseParams{1000, 1.0 / 3.0, 0.2}, ab::DenseParams{1000, 0.25, 0.05},
                                      ab::DenseParams{1000, 0.25, 0.25}, ab::DenseParams{1000, 0.0, 0.0}}) {
        try {
            ab::derive_dense_params(bad);
            FAIL("expected InvalidDenseParams");
        } catch (const ab::Error& e) {
            CHECK(e.kind() == ab::ErrorKind::InvalidDenseParams);
        }
    }
}

TEST_CASE("gen_bipartite_blowup: single edge, K=2, M=1") {
    ab::VertexLabels labels;
    labels.sides = {ab::Side::left, ab::Side::right};
    const auto base = ts::make_graph(2, {{0, 1}}, labels);
    const auto b = ab::gen_bipartite_blowup(base, 2, 1);
    CHECK(b.graph.num_vertices() == 4);
    CHECK(b.graph.num_edges() == 4);
    CHECK(ab::alpha_bipartite(b.graph).alpha == 2);
}

TEST_CASE("gen_bipartite_blowup: P3, K=3, M=2") {
    ab::VertexLabels labels;
    labels.sides = {ab::Side::left, ab::Side::right, ab::Side::left};
    const auto base = ts::make_graph(3, {{0, 1}, {1, 2}}, labels);
    const auto b = ab::gen_bipartite_blowup(base, 3, 2);
    CHECK(b.graph.num_vertices() == 18);
    CHECK(ts::enumerate_alpha(base) == 2);
    CHECK(ab::alpha_bipartite(b.graph).alpha == 2 * 3 * 2);
    CHECK(ts::enumerate_alpha(b.graph) == 12);
    CHECK(ab::has_valid_bipartition(b.graph));
}

TEST_CASE("gen_bipartite_blowup: clouds partition the vertex set") {
    const auto base = ab::gen_random_balanced_bipartite(10, 3, 2);
    const auto b = ab::gen_bipartite_blowup(base, 4, 3);
    CHECK(b.meta.num_clouds() == 20 * 3);
    std::vector<int> seen(b.graph.num_vertices(), 0);
    for (std::size_t c = 0; c < b.meta.num_clouds(); ++c) {
        const auto members = b.meta.members(c);
        CHECK(members.size() == 4);
        CHECK(ab::is_independent(b.graph, members));
        for (auto v : members) {
            ++seen[v];
            CHECK(b.graph.group(v) == static_cast<std::int64_t>(c));
            CHECK(b.meta.cloud_of(v) == c);
        }
    }
    for (int s : seen) CHECK(s == 1);
    CHECK(ab::alpha_bipartite(b.graph).alpha == ab::alpha_bipartite(base).alpha * 4 * 3);
}

TEST_CASE("gen_star_tree") {
    const auto t3 = ab::gen_star_tree(3);
    CHECK(t3.num_vertices() == 7);
    CHECK(t3.num_edges() == 6);
    CHECK(t3.degree(0) == 3);
    CHECK(ab::alpha_tree(t3).alpha == 4);
    const auto t1 = ab::gen_star_tree(1);
    CHECK(t1.num_vertices() == 3);
    CHECK(ts::enumerate_alpha(t1) == 2);
    // k = 5: the optimum is unique and holds the root.
    const auto t5 = ab::gen_star_tree(5);
    CHECK(ts::enumerate_alpha(t5) == 6);
    CHECK(ts::count_maximum_sets(t5) == 1);
    const auto w = *ab::alpha_bruteforce(t5).witness;
    CHECK(w.front() == 0);
    for (ab::VertexId i = 1; i <= 5; ++i) CHECK(t5.side(i) == ab::Side::right);
}

TEST_CASE("gen_hard_tree") {
    const auto g = ab::gen_hard_tree(3, 2, true);
    CHECK(g.num_vertices() == 15);
    CHECK(ab::is_forest(g));
    CHECK(g.degree(14) == 2);
    CHECK(ab::alpha_tree(g).alpha == 8);
    CHECK(ts::enumerate_alpha(g) == 8);
    const auto small = ab::gen_hard_tree(1, 1, true);
    CHECK(small.num_vertices() == 4);
    CHECK(ab::alpha_tree(small).alpha == ts::enumerate_alpha(small));
    const auto forest = ab::gen_hard_tree(4, 4, false);
    CHECK(forest.num_vertices() == 4 * 9);
    CHECK(ab::alpha_tree(forest).alpha == 4 * 5);
}

TEST_CASE("gen_random_balanced_bipartite") {
    const auto e = ab::gen_random_balanced_bipartite(4, 0.0, 1);
    CHECK(e.num_vertices() == 8);
    CHECK(e.num_edges() == 0);
    CHECK(e.has_sides());

    const std::size_t n = 10000;
    const auto g = ab::gen_random_balanced_bipartite(n, 16.0, 8);
    std::size_t left = 0;
    for (ab::VertexId v = 0; v < 2 * n; ++v) left += g.side(v) == ab::Side::left;
    CHECK(std::abs(static_cast<double>(left) - static_cast<double>(n)) <= 4 * std::sqrt(2.0 * n * 0.25));
    // E[edges] = left * right * d / n; mean degree = 2 E / 2n.
    const double expected_edges = static_cast<double>(left) * static_cast<double>(2 * n - left) * 16.0 / n;
    const double mean_degree = 2.0 * static_cast<double>(g.num_edges()) / (2.0 * n);
    CHECK(std::abs(mean_degree - expected_edges / n) <= 0.1 * expected_edges / n);
    // About n^2 cross pairs at probability d/n: d n edges, mean degree d.
    CHECK(mean_degree == doctest::Approx(16.0).epsilon(0.1));
    CHECK(ab::has_valid_bipartition(g));
}

TEST_CASE("gen_appendix_anchor") {
    const std::size_t n = 6;
    const auto g = ab::gen_appendix_anchor(n);
    CHECK(g.num_vertices() == 13);
    CHECK(g.degree(12) == n);
    for (ab::VertexId v = 0; v < n; ++v) CHECK(g.degree(v) == n + 1);
    for (ab::VertexId v = n; v < 2 * n; ++v) CHECK(g.degree(v) == 2 * n - 1);
    const auto g4 = ab::gen_appendix_anchor(4);
    CHECK(ts::enumerate_alpha(g4) == 4);
    CHECK(ts::count_maximum_sets(g4) == 1);
    const auto w = *ab::alpha_bruteforce(g4).witness;
    CHECK(w == std::vector<ab::VertexId>{0, 1, 2, 3});
}

TEST_CASE("gen_appendix_multicopy") {
    // n = 3 with n^eps = 2.
    const double eps = std::log(2.0) / std::log(3.0) + 1e-12;
    CHECK(ab::multicopy_part_size(3, eps) == 2);
    const auto g = ab::gen_appendix_multicopy(3, eps);
    CHECK(g.num_vertices() == 15);
    CHECK(ts::enumerate_alpha(g) == 6);
    const auto h = ab::gen_appendix_multicopy(64, 0.5);
    CHECK(h.num_vertices() == 64 * (64 + 8));
    // Copies are disjoint; each contributes its independent part.
    CHECK(ab::alpha_auto(ab::gen_appendix_multicopy(5, 0.5)).alpha >= 5 * 2);
}

TEST_CASE("make_instance: closed-form alpha matches the oracle") {
    struct Case {
        std::string family;
        ab::ParamMap params;
    };
    const std::vector<Case> cases = {
        {"star_tree", {{"k", "7"}}},
        {"hard_tree", {{"k", "3"}, {"copies", "4"}}},
        {"forest", {{"k", "2"}, {"copies", "3"}}},
        {"anchor", {{"n", "7"}}},
        {"multicopy", {{"n", "4"}, {"eps", "0.5"}}},
    };
    for (const auto& c : cases) {
        const auto inst = ab::make_instance(c.family, c.params, 1);
        REQUIRE(inst.formula_alpha.has_value());
        CHECK(*inst.formula_alpha == ab::alpha_auto(inst.graph).alpha);
        if (inst.graph.num_vertices() <= 24) CHECK(*inst.formula_alpha == ts::enumerate_alpha(inst.graph));
    }
}

TEST_CASE("make_instance: implicit clique blowup and errors") {
    const auto inst = ab::make_instance("clique_blowup", {{"n", "50"}, {"k", "4"}, {"ell", "2000"}, {"p", "0.05"}}, 3);
    CHECK(inst.implicit);
    CHECK(inst.cliques->ell == 2000);
    CHECK(inst.simulated_graph().num_vertices() == 250);
    CHECK(inst.relations.has_value());
    CHECK_THROWS_AS(ab::make_instance("nonsense", {}, 0), ab::Error);
    CHECK_THROWS_AS(ab::make_instance("star_tree", {}, 0), ab::Error);
    const auto meta = ab::format_metadata(ab::make_instance("star_tree", {{"k", "3"}}, 0));
    CHECK(meta.find("family = star_tree") != std::string::npos);
    CHECK(meta.find("formula_alpha = 4") != std::string::npos);
}
