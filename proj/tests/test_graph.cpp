#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "annealbench/errors.hpp"
#include "annealbench/graph.hpp"
#include "support.hpp"

namespace ab = annealbench;
using testsupport::make_graph;

namespace {

ab::ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const ab::Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ab::ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("build_graph: path on three vertices") {
    const auto g = make_graph(3, {{0, 1}, {1, 2}});
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(2) == 1);
}

TEST_CASE("build_graph: reversed duplicate collapses") {
    const auto g = make_graph(2, {{0, 1}, {1, 0}});
    CHECK(g.num_edges() == 1);
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(1, 0));
}

TEST_CASE("build_graph: no edges") {
    const auto g = make_graph(5, {});
    CHECK(g.num_vertices() == 5);
    CHECK(g.num_edges() == 0);
}

TEST_CASE("build_graph: invalid edges") {
    CHECK(kind_of([] { make_graph(3, {{0, 3}}); }) == ab::ErrorKind::InvalidEdge);
    CHECK(kind_of([] { make_graph(3, {{1, 1}}); }) == ab::ErrorKind::InvalidEdge);
}

TEST_CASE("build_graph: adjacency is symmetric, sorted and duplicate free") {
    const auto g = make_graph(6, {{5, 0}, {2, 0}, {0, 2}, {3, 1}, {4, 5}, {1, 3}, {0, 4}});
    for (ab::VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto nb = g.neighbors(v);
        for (std::size_t i = 1; i < nb.size(); ++i) CHECK(nb[i - 1] < nb[i]);
        for (auto u : nb) {
            CHECK(u != v);
            CHECK(g.adjacent(u, v));
        }
    }
    CHECK(g.num_edges() == 5);
}

TEST_CASE("build_graph: deterministic") {
    const std::vector<ab::Edge> e = {{3, 1}, {0, 2}, {2, 3}, {1, 0}};
    CHECK(make_graph(4, e) == make_graph(4, e));
}

TEST_CASE("build_graph: bipartite kinds reject same-side edges") {
    ab::VertexLabels labels;
    labels.sides = {ab::Side::left, ab::Side::left, ab::Side::right};
    CHECK(kind_of([&] { make_graph(3, {{0, 1}}, labels, ab::GraphKind::base_bipartite); }) ==
          ab::ErrorKind::NotBipartite);
    // Generic graphs only carry the labels.
    CHECK_NOTHROW(make_graph(3, {{0, 1}}, labels, ab::GraphKind::generic));
}

TEST_CASE("is_independent on a path a-b-c") {
    const auto g = testsupport::path(3);
    const std::vector<ab::VertexId> ac = {0, 2}, ab_ = {0, 1};
    CHECK(ab::is_independent(g, ac));
    CHECK_FALSE(ab::is_independent(g, ab_));
}

TEST_CASE("is_independent: any pair in K5 fails") {
    const auto g = testsupport::clique(5);
    for (ab::VertexId u = 0; u < 5; ++u)
        for (ab::VertexId v = u + 1; v < 5; ++v) {
            const std::vector<ab::VertexId> s = {u, v};
            CHECK_FALSE(ab::is_independent(g, s));
        }
}

TEST_CASE("has_valid_bipartition and is_forest") {
    CHECK(ab::has_valid_bipartition(testsupport::complete_bipartite(2, 3)));
    CHECK_FALSE(ab::has_valid_bipartition(testsupport::path(3)));  // unlabeled
    CHECK(ab::is_forest(testsupport::path(6)));
    CHECK(ab::is_forest(make_graph(4, {})));
    CHECK_FALSE(ab::is_forest(testsupport::cycle(4)));
}

TEST_CASE("graph file: byte-exact round trip with labels and groups") {
    ab::VertexLabels labels;
    labels.sides = {ab::Side::left, ab::Side::left, ab::Side::right, ab::Side::right, ab::Side::none};
    labels.groups = {0, 0, 1, ab::kNoGroup, 7};
    const auto g = make_graph(5, {{0, 2}, {1, 3}, {0, 3}}, labels);
    const std::string text = ab::format_graph(g);
    CHECK(text.rfind("p is 5 3\n", 0) == 0);
    const auto back = ab::parse_graph(text);
    CHECK(back.edges() == g.edges());
    CHECK(ab::format_graph(back) == text);
    for (ab::VertexId v = 0; v < 5; ++v) {
        CHECK(back.side(v) == g.side(v));
        CHECK(back.group(v) == g.group(v));
    }
}

TEST_CASE("graph file: comments skipped, malformed input rejected") {
    const auto g = ab::parse_graph("c hello\np is 3 1\ne 0 2\n");
    CHECK(g.num_edges() == 1);
    CHECK(g.adjacent(0, 2));
    CHECK_THROWS_AS(ab::parse_graph("p is 3 2\ne 0 1\n"), ab::Error);
    CHECK_THROWS_AS(ab::parse_graph("e 0 1\n"), ab::Error);
    CHECK_THROWS_AS(ab::parse_graph("p is 2 1\ne 0 x\n"), ab::Error);
}

TEST_CASE("IndependentSetState keeps size and running maximum") {
    const auto g = testsupport::path(4);
    ab::IndependentSetState s(4);
    s.insert(0);
    s.insert(2);
    CHECK(s.size() == 2);
    CHECK(s.max_size_seen() == 2);
    CHECK(ab::state_is_independent(g, s));
    s.erase(0);
    CHECK(s.size() == 1);
    CHECK(s.max_size_seen() == 2);
    s.insert(1);
    CHECK_FALSE(ab::state_is_independent(g, s));
    const std::vector<ab::VertexId> set = {0, 3};
    s.assign(set);
    CHECK(s.members() == set);
    CHECK(s.max_size_seen() == 2);
}
