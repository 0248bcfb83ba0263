#include "support.hpp"
#include "spinstrata/stable_graph.hpp"

using namespace spinstrata;

TEST_CASE("graph counts in small genus") {
    CHECK(enumerate_stable_graphs(0, 4, 10).size() == 4);  // smooth plus three boundary points
    CHECK(enumerate_one_edge_graphs(0, 4).size() == 3);
    CHECK(enumerate_one_edge_graphs(1, 2).size() == 2);
    CHECK(enumerate_one_edge_graphs(1, 3).size() == 5);
    CHECK(enumerate_one_edge_graphs(2, 0).size() == 2);
    CHECK(enumerate_stable_graphs(0, 5, 10).size() == 26);
    CHECK(enumerate_stable_graphs(1, 1, 10).size() == 2);
    CHECK(enumerate_stable_graphs(2, 0, 10).size() == 7);
}

TEST_CASE("automorphisms") {
    auto one = enumerate_one_edge_graphs(1, 1);
    REQUIRE(one.size() == 1);
    CHECK(automorphism_order(one[0]) == 2);
    // banana graph in genus 2: two genus-0 vertices joined by three edges
    StableGraph banana;
    banana.genera = {0, 0};
    banana.halves = {{1, 3, 5}, {2, 4, 6}};
    banana.edges = {{1, 2}, {3, 4}, {5, 6}};
    CHECK(automorphism_order(banana) == 12);
    StableGraph figure8;
    figure8.genera = {0};
    figure8.halves = {{1, 2, 3, 4}};
    figure8.edges = {{1, 2}, {3, 4}};
    CHECK(automorphism_order(figure8) == 8);
}

TEST_CASE("validation reports violations") {
    StableGraph bad;
    bad.genera = {0, 1};
    bad.halves = {{1, 10}, {11}};
    bad.edges = {{10, 11}};
    auto v = validate_stable_graph(bad, 1, {1});
    bool unstable = false;
    for (auto& x : v) unstable = unstable || x.what == "unstable vertex";
    CHECK(unstable);
    CHECK(validate_stable_graph(StableGraph::smooth(1, {1}), 1, {1}).empty());
    CHECK(!validate_stable_graph(StableGraph::smooth(1, {1}), 2, {1}).empty());
}

TEST_CASE("isomorphism ignores half labels") {
    StableGraph a, b;
    a.genera = {0, 0};
    a.halves = {{1, 2, 10}, {3, 4, 11}};
    a.edges = {{10, 11}};
    b.genera = {0, 0};
    b.halves = {{3, 4, 20}, {1, 2, 21}};
    b.edges = {{21, 20}};
    CHECK(isomorphic(a, b));
    b.halves = {{1, 3, 20}, {2, 4, 21}};
    CHECK(!isomorphic(a, b));
}

TEST_CASE("gamma structures") {
    // Δ: genus-0 vertex with legs 1,2 and a loop, joined to genus 1 with leg 3 (genus 2, n=3).
    StableGraph delta;
    delta.genera = {0, 1};
    delta.halves = {{1, 2, 10, 11, 12}, {3, 13}};
    delta.edges = {{10, 11}, {12, 13}};
    auto sep = contract_edges(delta, {1});
    auto loop = contract_edges(delta, {0});
    CHECK(sep.num_vertices() == 2);
    CHECK(loop.num_vertices() == 1);
    CHECK(enumerate_gamma_structures(delta, sep).size() == 1);
    // the loop can be oriented two ways
    CHECK(enumerate_gamma_structures(delta, loop).size() == 2);
    CHECK(enumerate_gamma_structures(delta, delta).size() == 2);
}
