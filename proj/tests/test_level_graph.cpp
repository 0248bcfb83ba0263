#include "support.hpp"
#include "spinstrata/level_graph.hpp"

#include <algorithm>
#include <set>

using namespace spinstrata;

namespace {

// top legs, sorted kappas, vertex count
struct Shape {
    std::vector<int> top_legs;
    std::vector<int> kappas;
    int vertices;
    bool operator<(const Shape& o) const {
        return std::tie(top_legs, kappas, vertices) < std::tie(o.top_legs, o.kappas, o.vertices);
    }
};

Shape shape(const EnhancedLevelGraph& d) {
    Shape s;
    for (int v : d.vertices_at(0))
        for (int l : d.base.legs_at(v)) s.top_legs.push_back(l);
    std::sort(s.top_legs.begin(), s.top_legs.end());
    s.kappas = d.vertical_kappas();
    std::sort(s.kappas.begin(), s.kappas.end());
    s.vertices = d.base.num_vertices();
    return s;
}

bool vertex_sums_ok(const EnhancedLevelGraph& d) {
    for (int v = 0; v < d.base.num_vertices(); ++v) {
        long s = 0;
        for (int h : d.base.halves[v]) s += d.base.is_leg(h) ? d.orders.at(h) : d.node_order(h);
        if (s != d.k * (2L * d.base.genera[v] - 2)) return false;
    }
    return true;
}

const EnhancedLevelGraph* find_shape(const std::vector<EnhancedLevelGraph>& gs, Shape want) {
    for (auto& d : gs)
        if (!(shape(d) < want) && !(want < shape(d))) return &d;
    return nullptr;
}

}  // namespace

TEST_CASE("enhancements from node orders") {
    auto e = enhancement_from_orders(2, -4);
    CHECK(e.kind == Enhancement::Kind::Vertical);
    CHECK(e.kappa == 3);
    CHECK(enhancement_from_orders(0, -2).kappa == 1);
    CHECK(enhancement_from_orders(-1, -1).kind == Enhancement::Kind::Horizontal);
    CHECK(enhancement_from_orders(1, -2).kind == Enhancement::Kind::Incompatible);
    CHECK(enhancement_from_orders(2, -8, 3).kappa == 5);
}

TEST_CASE("prong class counts") {
    CHECK(prong_matching_class_count(std::vector<int>{3, 1}) == Rational(1));
    CHECK(prong_matching_class_count(std::vector<int>{2, 2}) == Rational(2));
    CHECK(prong_matching_class_count(std::vector<int>{3}) == Rational(1));
    CHECK(prong_matching_class_count(std::vector<int>{4, 6, 2}) == Rational(4));
}

TEST_CASE("two-level graphs of H_1(4,-2,-2)") {
    auto gs = enumerate_two_level_graphs(GeneralisedStratum::connected(1, {4, -2, -2}));
    REQUIRE(gs.size() == 9);
    std::set<Shape> shapes;
    for (auto& d : gs) {
        CHECK(d.violations().empty());
        CHECK(vertex_sums_ok(d));
        CHECK(prong_matching_class_count(d) * Rational(static_cast<long>(d.ell())) == d.prod_kappa());
        shapes.insert(shape(d));
    }
    CHECK(shapes.size() == 9);
    // (A), (B): one pole on top, two κ=1 edges
    auto a = find_shape(gs, {{3}, {1, 1}, 2});
    auto b = find_shape(gs, {{2}, {1, 1}, 2});
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->automorphisms() == 2);
    CHECK(b->automorphisms() == 2);
    auto c = find_shape(gs, {{2, 3}, {1, 3}, 2});
    REQUIRE(c);
    CHECK(c->automorphisms() == 1);
    auto dd = find_shape(gs, {{2, 3}, {2, 2}, 2});
    REQUIRE(dd);
    CHECK(dd->automorphisms() == 2);
    CHECK(find_shape(gs, {{2, 3}, {3}, 2}));  // F
    CHECK(find_shape(gs, {{2}, {3}, 2}));     // G
    CHECK(find_shape(gs, {{3}, {3}, 2}));     // H
    CHECK(find_shape(gs, {{}, {1}, 2}));      // I
    auto j = find_shape(gs, {{2, 3}, {1, 3}, 3});
    REQUIRE(j);
    CHECK(j->vertices_at(0).size() == 2);
}

TEST_CASE("level strata of the (4,-2,-2) graphs") {
    auto gs = enumerate_two_level_graphs(GeneralisedStratum::connected(1, {4, -2, -2}));
    auto f = find_shape(gs, {{2, 3}, {3}, 2});
    REQUIRE(f);
    auto fb = extract_level_stratum(*f, Level::Bottom).stratum;
    REQUIRE(fb.num_components() == 1);
    CHECK(fb.components[0].genus == 1);
    auto o = fb.components[0].orders;
    std::sort(o.begin(), o.end());
    CHECK(o == std::vector<int>{-4, 4});
    CHECK(fb.residues.empty());

    auto i = find_shape(gs, {{}, {1}, 2});
    REQUIRE(i);
    auto ib = extract_level_stratum(*i, Level::Bottom);
    REQUIRE(ib.grc.size() == 1);
    CHECK(ib.stratum.components[0].genus == 0);
    CHECK(ib.stratum.components[0].orders.size() == 4);
    int newpole = ib.grc[0].begin()->first;
    CHECK(ib.grc[0].size() == 1);
    CHECK(ib.stratum.order_of(newpole) == -2);
    CHECK(ib.stratum.residue_forced_zero(newpole));
    CHECK(ib.stratum.emptiness().empty());

    auto j = find_shape(gs, {{2, 3}, {1, 3}, 3});
    REQUIRE(j);
    auto jt = extract_level_stratum(*j, Level::Top).stratum;
    CHECK(jt.num_components() == 2);
    CHECK(!jt.components_linked());
    auto jb = extract_level_stratum(*j, Level::Bottom);
    CHECK(jb.grc.size() == 1);
    // the GRC leaves no room on the bottom
    CHECK(!jb.stratum.emptiness().empty());
}

TEST_CASE("level order sums reconstruct the ambient total") {
    for (auto mu : std::vector<std::vector<int>>{{4, -2, -2}, {2, -2}, {4, -4}, {2, 2, -2, -2}}) {
        auto gs = enumerate_two_level_graphs(GeneralisedStratum::connected(1, mu));
        CHECK(!gs.empty());
        for (auto& d : gs) {
            long total = 0;
            for (Level w : {Level::Top, Level::Bottom})
                for (auto& c : extract_level_stratum(d, w).stratum.components)
                    for (int m : c.orders) total += m;
            long edges = 0;
            for (int x : d.vertical_kappas()) edges += (x - 1) + (-x - 1);
            CHECK(total - edges == 0);
        }
    }
}

TEST_CASE("holomorphic genus-2 graphs") {
    auto gs = enumerate_two_level_graphs(GeneralisedStratum::connected(2, {2}));
    CHECK(!gs.empty());
    for (auto& d : gs) {
        CHECK(d.violations().empty());
        CHECK(vertex_sums_ok(d));
    }
    // H_1(0) is a point: no divisor, so no two-level graph
    CHECK(enumerate_two_level_graphs(GeneralisedStratum::connected(1, {0})).empty());
}

TEST_CASE("residue conditions prune level graphs") {
    ResidueConditions r{residue_part({3})};
    auto s = GeneralisedStratum::connected(1, {4, -2, -2}, r);
    CHECK(s.dimension() == 1);
    CHECK(s.emptiness().empty());
    auto gs = enumerate_two_level_graphs(s);
    CHECK(gs.size() < 9);
    for (auto& d : gs) CHECK(d.violations().empty());
}

TEST_CASE("generalised strata") {
    auto s = GeneralisedStratum::connected(1, {4, -2, -2});
    CHECK(s.dimension() == 2);
    CHECK(s.independent_conditions() == 0);
    // r2 = 0 already implies r3 = 0 through the residue theorem
    auto t = GeneralisedStratum::connected(1, {4, -2, -2}, {residue_part({2})});
    CHECK(t.residue_forced_zero(3));
    CHECK(t.independent_conditions() == 1);
    // simple pole with forced zero residue
    auto u = GeneralisedStratum::connected(0, {0, -1, -1}, {residue_part({2})});
    CHECK(!u.emptiness().empty());
    auto w = GeneralisedStratum::connected(0, {0, -1, -1});
    CHECK(w.emptiness().empty());
    // residue-free genus 0 needs small zeros
    CHECK(!GeneralisedStratum::connected(0, {4, -2, -4}, {residue_part({2})}).emptiness().empty());
    CHECK(!GeneralisedStratum::connected(0, {2, -2, -2}, {residue_part({2})}).emptiness().empty());
    CHECK(GeneralisedStratum::connected(0, {2, -2, -2}).emptiness().empty());
    CHECK(GeneralisedStratum::connected(0, {4, -2, -2, -2}, {residue_part({2})}).emptiness().empty());
    CHECK(as_part(residue_part({4, 2})) == std::vector<int>{2, 4});
}

TEST_CASE("linked components") {
    GeneralisedStratum s;
    s.components = {{0, {1, 2, 3}, {2, -2, -2}}, {0, {4, 5, 6}, {2, -2, -2}}};
    CHECK(!s.components_linked());
    s.residues = {residue_part({2, 5})};
    CHECK(s.components_linked());
    s.residues = {residue_part({2}), residue_part({5})};
    CHECK(!s.components_linked());
}

TEST_CASE("horizontal one-edge graphs") {
    auto h = enumerate_horizontal_one_edge(GeneralisedStratum::connected(1, {4, -2, -2}));
    REQUIRE(h.size() == 1);
    CHECK(h[0].base.num_vertices() == 1);
    CHECK(h[0].base.genera[0] == 0);

    auto m = enumerate_horizontal_one_edge(GeneralisedStratum::connected(4, {6}));
    REQUIRE(m.size() == 1);
    CHECK(m[0].base.num_vertices() == 1);

    auto s = GeneralisedStratum::connected(2, {2, 2, -1, -1}, {residue_part({3, 4})});
    auto c = enumerate_horizontal_one_edge(s);
    bool compact = false;
    for (auto& d : c) {
        if (d.base.num_vertices() != 2) continue;
        for (int v = 0; v < 2; ++v) {
            auto legs = d.base.legs_at(v);
            std::vector<int> o;
            for (int l : legs) o.push_back(d.orders.at(l));
            std::sort(o.begin(), o.end());
            if (o == std::vector<int>{-1, 2} && d.base.genera[v] == 1) compact = true;
        }
    }
    CHECK(compact);
}

TEST_CASE("simple star graphs") {
    auto all = simple_star_graphs({1, {4, -4}, 1}, false);
    CHECK(!all.empty());
    for (auto& d : all) {
        CHECK(d.vertices_at(-1).size() == 1);
        for (int v : d.vertices_at(0))
            for (int l : d.base.legs_at(v)) CHECK(d.orders.at(l) >= 0);
    }
    auto odd = simple_star_graphs({1, {4, -4}, 1}, true);
    std::set<std::string> odd_keys, filtered;
    for (auto& d : odd) odd_keys.insert(d.key());
    for (auto& d : all) {
        bool ok = true;
        for (int x : d.kappa) ok = ok && x % 2 == 1;
        if (ok) filtered.insert(d.key());
    }
    CHECK(odd_keys == filtered);
    CHECK_THROWS(simple_star_graphs({2, {2}, 1}, false));
    auto two = simple_star_graphs({1, {2, -2}, 1}, true);
    REQUIRE(two.size() == 1);
    CHECK(two[0].vertical_kappas() == std::vector<int>{1});
}
