#include "support.hpp"
#include "spinstrata/spin.hpp"

#include <complex>
#include <random>

using namespace spinstrata;

namespace {

Multigraph complete_graph(int n) {
    Multigraph g;
    g.num_vertices = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
    return g;
}

EnhancedLevelGraph bare(std::vector<int> genera, std::vector<std::pair<int, int>> vertex_edges, std::vector<int> kappa) {
    EnhancedLevelGraph d;
    d.base.genera = genera;
    d.base.halves.assign(genera.size(), {});
    d.level.assign(genera.size(), 0);
    int lab = 100;
    for (auto [u, v] : vertex_edges) {
        d.base.halves[u].push_back(lab);
        d.base.halves[v].push_back(lab + 1);
        d.base.edges.push_back({lab, lab + 1});
        lab += 2;
    }
    d.kappa = kappa;
    return d;
}

std::vector<int> some_parities(const EnhancedLevelGraph& d, unsigned mask) {
    std::vector<int> p;
    for (int v = 0; v < d.base.num_vertices(); ++v) p.push_back(d.base.genera[v] > 0 ? (mask >> v) & 1u : 0);
    return p;
}

}  // namespace

TEST_CASE("spanning tree of a tree") {
    Multigraph path;
    path.num_vertices = 4;
    path.edges = {{0, 1}, {1, 2}, {2, 3}};
    auto t = build_adapted_spanning_tree(path);
    CHECK(t.tree_edges.size() == 3);
    CHECK(t.cycles.empty());
    CHECK(planarity_audit(path, t).empty());

    Multigraph banana;
    banana.num_vertices = 2;
    banana.edges = {{0, 1}, {0, 1}};
    auto b = build_adapted_spanning_tree(banana);
    CHECK(b.cycles.size() == 1);
    CHECK(b.cycles[0].size() == 2);
}

TEST_CASE("star tree on six vertices is repaired") {
    // d=0, a=1, b=2, c=3, v*=4, e=5; the initial tree is the star at d
    auto g = complete_graph(6);
    std::vector<int> star{0, 1, 2, 3, 4};
    AdaptedTree naive;
    naive.tree_edges = star;
    for (int e = 5; e < 15; ++e) {
        naive.cotree_edges.push_back(e);
        naive.cycles.push_back(fundamental_cycle(g, star, e));
    }
    // the four nodal points at d away from v* pairwise share a cycle
    CHECK(!planarity_audit(g, naive).empty());
    auto t = build_adapted_spanning_tree(g, star, 4);
    CHECK(t.root == 4);
    CHECK(t.replacements > 0);
    CHECK(t.tree_edges.size() == 5);
    CHECK(t.cycles.size() == 10);
    CHECK(planarity_audit(g, t).empty());
}

TEST_CASE("planarity audit on random multigraphs") {
    std::mt19937 rng(20240611);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        int extra = static_cast<int>(rng() % 8);
        Multigraph g;
        g.num_vertices = n;
        for (int v = 1; v < n; ++v) g.edges.push_back({static_cast<int>(rng() % v), v});
        for (int i = 0; i < extra; ++i) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a != b) g.edges.push_back({std::min(a, b), std::max(a, b)});
        }
        std::shuffle(g.edges.begin(), g.edges.end(), rng);
        auto t = build_adapted_spanning_tree(g);
        CHECK(static_cast<int>(t.tree_edges.size()) == n - 1);
        CHECK(t.cycles.size() == g.edges.size() - (n - 1));
        CHECK(planarity_audit(g, t).empty());
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("adapted bases") {
    auto tri = bare({1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}}, {1, 1, 1});
    auto b = delta_adapted_basis(tri);
    CHECK(b.graph_cycles.size() == 1);
    CHECK(b.genus() == 4);

    auto single = bare({3}, {}, {});
    auto s = delta_adapted_basis(single);
    CHECK(s.graph_cycles.empty());
    CHECK(s.genus() == 3);

    auto banana = bare({0, 0}, {{0, 1}, {0, 1}}, {1, 2});
    auto bb = delta_adapted_basis(banana);
    REQUIRE(bb.vanishing_edges.size() == 1);
    CHECK(bb.kappa[bb.vanishing_edges[0]] == 2);
    auto& c = bb.graph_cycles[0];
    CHECK(std::count(c.begin(), c.end(), 1) == 1);
}

TEST_CASE("arf parity") {
    auto torus = bare({1}, {}, {});
    auto b = delta_adapted_basis(torus);
    CHECK(arf_parity(b, turning_assignment(b, {1}), ProngMatching::zero(torus)) == 1);
    CHECK(arf_parity(b, turning_assignment(b, {0}), ProngMatching::zero(torus)) == 0);
    CHECK_THROWS(turning_assignment(delta_adapted_basis(bare({0, 0}, {{0, 1}, {0, 1}}, {1, 1})), {1, 0}));

    auto banana = bare({1, 0}, {{0, 1}, {0, 1}}, {1, 2});
    auto bb = delta_adapted_basis(banana);
    auto t = turning_assignment(bb, {1, 0});
    auto s = ProngMatching::zero(banana);
    int p0 = arf_parity(bb, t, s);
    CHECK(arf_parity(bb, t, rotate_prong_matching(s, 1, 1)) == 1 - p0);
    CHECK(arf_parity(bb, t, rotate_prong_matching(s, 0, 1)) == p0);
}

TEST_CASE("prong rotations") {
    auto banana = bare({1, 0}, {{0, 1}, {0, 1}}, {3, 0});
    auto s = ProngMatching::zero(banana);
    CHECK(rotate_prong_matching(s, 0, 0).offsets == s.offsets);
    CHECK(rotate_prong_matching(s, 0, 3).offsets == s.offsets);
    CHECK(rotate_prong_matching(s, 0, 2).offsets[0] == 2);
    CHECK(rotate_prong_matching(rotate_prong_matching(s, 0, 2), 0, 2).offsets[0] == 1);
    CHECK_THROWS(rotate_prong_matching(s, 1, 1));
}

TEST_CASE("classification against the brute-force census") {
    std::vector<GeneralisedStratum> strata{
        GeneralisedStratum::connected(1, {4, -2, -2}), GeneralisedStratum::connected(1, {2, 2, -2, -2}),
        GeneralisedStratum::connected(1, {6, -2, -2, -2}), GeneralisedStratum::connected(2, {2, 2}),
        GeneralisedStratum::connected(2, {4}), GeneralisedStratum::connected(2, {4, 2, -2})};
    int graphs = 0, half = 0;
    for (auto& st : strata)
        for (auto& d : enumerate_two_level_graphs(st))
            for (unsigned mask = 0; mask < 4; ++mask) {
                auto p = some_parities(d, mask);
                auto cls = classify_spin(d, p);
                auto census = prong_parity_census(d, p);
                if (cls.kind == SpinClassification::Kind::HalfHalf) {
                    CHECK(census.even == census.odd);
                    ++half;
                } else {
                    CHECK((cls.parity ? census.even : census.odd) == 0);
                }
                ++graphs;
            }
    CHECK(graphs > 50);
    CHECK(half > 0);
}

TEST_CASE("parity is constant on prong classes") {
    for (auto& d : enumerate_two_level_graphs(GeneralisedStratum::connected(2, {4, 2, -2}))) {
        auto b = delta_adapted_basis(d);
        CHECK(planarity_audit(Multigraph::of(d.base), b.tree).empty());
        CHECK(b.genus() == 2);
        auto t = turning_assignment(b, some_parities(d, 3));
        auto s = ProngMatching::zero(d);
        std::uint64_t total = s.group_order();
        for (std::uint64_t i = 0; i < total; ++i) {
            std::uint64_t x = i;
            for (std::size_t e = 0; e < s.kappa.size(); ++e) {
                s.offsets[e] = static_cast<long>(x % s.kappa[e]);
                x /= s.kappa[e];
            }
            auto shifted = s;
            for (std::size_t e = 0; e < s.kappa.size(); ++e) shifted = rotate_prong_matching(shifted, e, 1);
            CHECK(arf_parity(b, t, s) == arf_parity(b, t, shifted));
        }
    }
}

TEST_CASE("graph F of (4,-2,-2) is constant") {
    auto gs = enumerate_two_level_graphs(GeneralisedStratum::connected(1, {4, -2, -2}));
    for (auto& d : gs) {
        auto k = d.vertical_kappas();
        if (k != std::vector<int>{3} || d.vertices_at(0).size() != 1) continue;
        if (d.base.genera[d.vertices_at(0)[0]] != 0) continue;
        auto cls = classify_spin(d, some_parities(d, 3));
        CHECK(cls.kind == SpinClassification::Kind::Constant);
        CHECK(cls.parity == 1);
    }
}

TEST_CASE("genus-0 paired pole census") {
    for (int k = 1; k <= 6; ++k) {
        auto [even, odd] = genus0_paired_pole_census(k);
        CHECK(even - odd == 1);
        CHECK(even + odd == 2 * k - 1);
        // nodal model: the theta characteristic on P^1/(1~ζ) is trivial, hence odd, iff ζ^k = 1
        for (auto& c : genus0_paired_pole_configurations(k)) {
            std::complex<double> zeta = std::polar(1.0, M_PI * c.sector / k);
            bool trivial = std::abs(std::pow(zeta, k) - 1.0) < 1e-9;
            CHECK(c.parity == (trivial ? 1 : 0));
        }
    }
}

TEST_CASE("base parities") {
    CHECK(base_parity({0, {0, -1, -1}, 1}) == 1);
    CHECK(base_parity({0, {-1, 0, -1}, 1}) == 1);
    CHECK(base_parity({0, {2, -2, -2}, 1}) == 0);
    CHECK(base_parity({0, {4, -2, -2, -2}, 1}) == 0);
    CHECK(!base_parity({0, {1, -1, -2}, 1}));
    CHECK(!base_parity({1, {2, -2}, 1}));
    CHECK(horizontal_join_spin_sign() == -1);
}
