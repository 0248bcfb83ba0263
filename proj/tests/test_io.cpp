#include "support.hpp"
#include "spinstrata/io.hpp"

using namespace spinstrata;

TEST_CASE("rationals serialize as p/q") {
    CHECK(to_json(Rational(-7, 2)) == "-7/2");
    CHECK(to_json(Rational(3)) == "3");
    CHECK(rational_from_json(json("5/10")) == Rational(1, 2));
    CHECK(rational_from_json(json(4)) == Rational(4));
}

TEST_CASE("graph round trip") {
    for (auto& g : enumerate_stable_graphs(1, {1, 2}, 2)) {
        auto back = graph_from_json(to_json(g));
        CHECK(canonical_form(back) == canonical_form(g));
        CHECK(to_json(back).dump() == to_json(g).dump());
    }
}

TEST_CASE("class round trip") {
    auto c = Rational(3) * mul_psi(DecoratedClass::fundamental(1, {1, 2}), 1);
    for (auto& gm : enumerate_one_edge_graphs(1, {1, 2})) {
        DecoratedTerm t;
        t.graph = gm;
        t.kappa.assign(gm.num_vertices(), {});
        c -= DecoratedClass::from_term(1, {1, 2}, t);
    }
    c += Rational(1, 4) * mul_kappa(DecoratedClass::fundamental(1, {1, 2}), 1);
    auto j = to_json(c);
    CHECK(j["degree"] == 1);
    auto back = class_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
    auto probes = chains_of_degree(1, {1, 2}, 1);
    CHECK(fingerprint(back, probes) == fingerprint(c, probes));
}

TEST_CASE("level graph fields") {
    auto s = GeneralisedStratum::connected(1, {4, -2, -2});
    auto gs = enumerate_two_level_graphs(s);
    REQUIRE_FALSE(gs.empty());
    auto j = to_json(gs.front());
    CHECK(j.contains("levels"));
    CHECK(j.contains("kappa"));
    CHECK(j["horizontal"].empty());
    auto sj = to_json(GeneralisedStratum::connected(1, {4, -2, -2}, {residue_part({2, 3})}));
    CHECK(sj["residues"].dump() == "[[[0,2],[0,3]]]");
}

TEST_CASE("argument parsing") {
    CHECK(parse_int_list("4,-2,-2") == std::vector<int>{4, -2, -2});
    CHECK_THROWS(parse_int_list("4,x"));
    CHECK_THROWS(parse_int_list(""));
    auto r = parse_residue("3:0");
    CHECK(r.size() == 1);
    CHECK(r.at(3) == Rational(1));
    auto r2 = parse_residue("2+3:0");
    CHECK(as_part(r2) == std::vector<int>{2, 3});
    auto r3 = parse_residue("2*3-4:0");
    CHECK(r3.at(3) == Rational(2));
    CHECK(r3.at(4) == Rational(-1));
    CHECK_THROWS(parse_residue("3"));
    CHECK_THROWS(parse_residue("3-3:0"));
}

TEST_CASE("trace serialization") {
    auto r = reconstruct_spin_class(GeneralisedStratum::connected(1, {2, -2}));
    auto j = to_json(r.trace);
    CHECK(j["root"] == r.trace.root);
    CHECK(j["nodes"].size() == r.trace.nodes.size());
    CHECK(j["nodes"][r.trace.root]["rule"] == "clutching system");
}
