#include "support.hpp"
#include "spinstrata/pixton.hpp"

using namespace spinstrata;

namespace {

StableGraph loop_graph() {
    StableGraph g;
    g.genera = {0};
    g.halves = {{1, 2, 3}};
    g.edges = {{2, 3}};
    return g;
}

Rational pair_with_psi1(const DecoratedClass& c, int power) { return integrate_class(mul_psi(c, 1, power)); }

}  // namespace

TEST_CASE("admissible weighting counts") {
    RamificationVector a{{1}, 1, 1};
    for (long r = 1; r <= 7; ++r) CHECK(admissible_weightings(loop_graph(), a, r, false).size() == std::size_t(r));
    for (long r = 2; r <= 12; r += 2) CHECK(admissible_weightings(loop_graph(), a, r, true).size() == std::size_t(r / 2));
    auto sep = enumerate_one_edge_graphs(1, {1, 2});
    RamificationVector b{{3, -1}, 1, 1};
    for (auto& g : sep)
        if (g.h1() == 0) CHECK(admissible_weightings(g, b, 5, false).size() == 1);
    // r^{h¹} whenever nonempty
    struct Case {
        int g;
        std::vector<int> a;
        int k;
    };
    for (auto c : std::vector<Case>{{1, {1}, 1}, {1, {3, -1}, 1}, {1, {2, 0}, 1}, {2, {}, 0}}) {
        RamificationVector rv{c.a, c.g, c.k};
        std::vector<int> legs;
        for (std::size_t i = 1; i <= c.a.size(); ++i) legs.push_back(static_cast<int>(i));
        for (auto& gamma : enumerate_stable_graphs(c.g, legs, 3))
            for (long r = 1; r <= 7; ++r) {
                auto ws = admissible_weightings(gamma, rv, r, false);
                long expect = 1;
                for (int i = 0; i < gamma.h1(); ++i) expect *= r;
                CHECK(ws.size() == std::size_t(expect));
                for (auto& w : ws)
                    for (auto [h, hp] : gamma.edges) CHECK((w.at(h) + w.at(hp)) % r == 0);
            }
    }
}

TEST_CASE("contribution classes") {
    RamificationVector a{{3, -1}, 1, 1};
    auto triv = StableGraph::smooth(1, {1, 2});
    Weighting w{{1, 3}, {2, 1}};
    auto c = contribution_class(a, triv, w, 1);
    CHECK(c.degree_part(0).terms().size() == 1);
    auto expect = mul_kappa(DecoratedClass::fundamental(1, {1, 2}), 1);
    expect *= Rational(-1);
    expect += Rational(9) * mul_psi(DecoratedClass::fundamental(1, {1, 2}), 1);
    expect += mul_psi(DecoratedClass::fundamental(1, {1, 2}), 2);
    auto diff = c.degree_part(1) - expect;
    CHECK(diff.is_zero());

    RamificationVector b{{1}, 1, 1};
    auto ws = admissible_weightings(loop_graph(), b, 5, false);
    for (auto& x : ws) {
        auto cc = contribution_class(b, loop_graph(), x, 1);
        Rational ww = Rational(x.at(2)) * Rational(x.at(3));
        if (ww.is_zero()) {
            CHECK(cc.is_zero());
            continue;
        }
        REQUIRE(cc.terms().size() == 1);
        CHECK(cc.terms().begin()->second.coeff == ww);
    }
}

TEST_CASE("interpolation matches direct sums") {
    for (bool spin : {false, true}) {
        RamificationVector a{{3, -1}, 1, 1};
        auto p = pixton_P_poly(a, 1, spin);
        for (long r : p.samples) CHECK((p.at(Rational(r)) - pixton_P(a, r, 1, spin)).is_zero());
        for (long r : p.checks) CHECK((p.at(Rational(r)) - pixton_P(a, r, 1, spin)).is_zero());
        auto q = pixton_P_poly(a, 1, spin, 1);
        CHECK(q.samples.front() > p.checks.back());
        CHECK((p.at(Rational(0)) - q.at(Rational(0))).is_zero());
        CHECK((p.at(Rational(7)) - q.at(Rational(7))).is_zero());
    }
}

TEST_CASE("DR intersection numbers") {
    // ∫ DR_1(a,-a) ψ₁ = (a²−1)/24 and ∫ DR_2(0) ψ₁⁴ = 7/5760 (k = 0)
    for (int x = 1; x <= 3; ++x) {
        auto dr = dr_cycle({{x, -x}, 1, 0});
        CHECK(dr.degree() == 1);
        CHECK(pair_with_psi1(dr, 1) == Rational(x * x - 1, 24));
    }
    auto dr2 = dr_cycle({{0}, 2, 0});
    CHECK(dr2.degree() == 2);
    CHECK(pair_with_psi1(dr2, 2) == Rational(7, 5760));
}

TEST_CASE("DR cycles") {
    CHECK((dr_cycle({{1, 1, -1}, 0, 1}) - DecoratedClass::fundamental(0, {1, 2, 3})).is_zero());
    auto d = dr_cycle({{1, 1}, 1, 1});
    CHECK(d.degree() == 1);
    auto p1 = pixton_P_poly({{1, 1}, 1, 1}, 1, false, 0).at(0);
    auto p2 = pixton_P_poly({{1, 1}, 1, 1}, 1, false, 1).at(0);
    CHECK(pair_with_psi1(p1, 1) == pair_with_psi1(p2, 1));
    // relabelling equivariance
    auto x = dr_cycle({{3, -1}, 1, 1});
    auto y = dr_cycle({{-1, 3}, 1, 1}).relabel({{1, 2}, {2, 1}});
    CHECK((x - y).is_zero());
    auto sx = spin_dr_cycle({{5, -3}, 1, 1});
    auto sy = spin_dr_cycle({{-3, 5}, 1, 1}).relabel({{1, 2}, {2, 1}});
    CHECK((sx - sy).is_zero());
    CHECK(sx.degree() == 1);
}

TEST_CASE("spin DR preconditions and prefactors") {
    CHECK_THROWS(spin_dr_cycle({{2, 0}, 1, 1}));
    CHECK_THROWS(pixton_P({{3, -1}, 1, 1}, 7, 1, true));
    CHECK((spin_dr_cycle({{1, 1, -1}, 0, 1}) - DecoratedClass::fundamental(0, {1, 2, 3})).is_zero());
    // trivial graph: ψ₁ coefficient a₁²/2^g; loop: Σ_{x odd} x(r−x) / (2·r), weight 2^0
    RamificationVector a{{3, -1}, 1, 1};
    long r = 10;
    auto p = pixton_P(a, r, 1, true);
    auto psi1 = mul_psi(DecoratedClass::fundamental(1, {1, 2}), 1);
    CHECK(p.terms().at(psi1.terms().begin()->first).coeff == Rational(9, 2));
    Rational loop_sum;
    for (long x = 1; x < r; x += 2) loop_sum += Rational(x * (r - x));
    StableGraph lg;
    lg.genera = {0};
    lg.halves = {{1, 2, 3, 4}};
    lg.edges = {{3, 4}};
    DecoratedTerm t;
    t.graph = lg;
    t.kappa = {{}};
    auto key = DecoratedClass::from_term(1, {1, 2}, t).terms().begin()->first;
    CHECK(p.terms().at(key).coeff == loop_sum / Rational(2 * r));
}

TEST_CASE("spin DR for (2,-2) in genus one") {
    // 3ψ₁ − δ_{0,{1,2}}, checked against all degree-1 probes
    auto s = spin_dr_cycle(RamificationVector::from_signature(1, {2, -2}));
    auto expect = Rational(3) * mul_psi(DecoratedClass::fundamental(1, {1, 2}), 1);
    for (auto& g : enumerate_one_edge_graphs(1, {1, 2}))
        if (g.h1() == 0) {
            DecoratedTerm t;
            t.graph = g;
            t.kappa.assign(g.num_vertices(), {});
            expect -= DecoratedClass::from_term(1, {1, 2}, t);
        }
    auto probes = chains_of_degree(1, {1, 2}, 1);
    CHECK(fingerprint(s, probes) == fingerprint(expect, probes));
}
