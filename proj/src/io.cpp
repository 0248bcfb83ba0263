#include "spinstrata/io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

json to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw std::invalid_argument("rational must be an integer or a \"p/q\" string");
}

json to_json(const StableGraph& g) {
    json j;
    j["vertices"] = g.genera;
    json legs = json::array();
    for (int v = 0; v < g.num_vertices(); ++v) legs.push_back(g.legs_at(v));
    j["legs"] = legs;
    json edges = json::array();
    for (auto& [a, b] : g.edges)
        edges.push_back(json::array({json::array({g.vertex_of(a), a}), json::array({g.vertex_of(b), b})}));
    j["edges"] = edges;
    j["canonical"] = canonical_form(g);
    return j;
}

StableGraph graph_from_json(const json& j) {
    StableGraph g;
    g.genera = j.at("vertices").get<std::vector<int>>();
    g.halves.assign(g.genera.size(), {});
    auto legs = j.at("legs").get<std::vector<std::vector<int>>>();
    if (legs.size() != g.genera.size()) throw std::invalid_argument("graph legs do not match vertices");
    for (std::size_t v = 0; v < legs.size(); ++v) g.halves[v] = legs[v];
    for (auto& e : j.at("edges")) {
        int va = e.at(0).at(0), ha = e.at(0).at(1), vb = e.at(1).at(0), hb = e.at(1).at(1);
        if (va < 0 || vb < 0 || va >= g.num_vertices() || vb >= g.num_vertices())
            throw std::invalid_argument("edge endpoint out of range");
        g.halves[va].push_back(ha);
        g.halves[vb].push_back(hb);
        g.edges.push_back({ha, hb});
    }
    g.normalize();
    return g;
}

json residues_json(const ResidueConditions& rs, const std::vector<std::vector<int>>& legs_by_component) {
    auto component = [&](int l) {
        for (std::size_t c = 0; c < legs_by_component.size(); ++c)
            if (std::find(legs_by_component[c].begin(), legs_by_component[c].end(), l) != legs_by_component[c].end())
                return static_cast<int>(c);
        return -1;
    };
    json out = json::array();
    for (auto& r : rs) {
        bool part = !as_part(r).empty();
        json cond = json::array();
        for (auto& [l, v] : r) {
            if (v.is_zero()) continue;
            json item = json::array({component(l), l});
            if (!part) item.push_back(to_json(v));
            cond.push_back(item);
        }
        out.push_back(cond);
    }
    return out;
}

json to_json(const EnhancedLevelGraph& d) {
    json j = to_json(d.base);
    j["levels"] = d.level;
    json kappa = json::object();
    json horizontal = json::array();
    for (int e = 0; e < d.base.num_edges(); ++e) {
        if (d.is_horizontal(e)) horizontal.push_back(e);
        else kappa[std::to_string(e)] = d.kappa[e];
    }
    j["kappa"] = kappa;
    j["horizontal"] = horizontal;
    json orders = json::object();
    for (auto& [l, m] : d.orders) orders[std::to_string(l)] = m;
    j["orders"] = orders;
    std::vector<std::vector<int>> by_vertex;
    for (int v = 0; v < d.base.num_vertices(); ++v) by_vertex.push_back(d.base.legs_at(v));
    j["residues"] = residues_json(d.residues, by_vertex);
    if (d.k != 1) j["k"] = d.k;
    if (d.is_vertical_two_level()) {
        j["ell"] = d.ell();
        j["prod_kappa"] = to_json(d.prod_kappa());
    }
    j["automorphisms"] = d.automorphisms();
    j["description"] = d.describe();
    return j;
}

json to_json(const GeneralisedStratum& s) {
    json j;
    json comps = json::array();
    std::vector<std::vector<int>> legs;
    for (auto& c : s.components) {
        comps.push_back({{"genus", c.genus}, {"legs", c.legs}, {"orders", c.orders}});
        legs.push_back(c.legs);
    }
    j["components"] = comps;
    j["residues"] = residues_json(s.residues, legs);
    j["k"] = s.k;
    j["description"] = s.describe();
    return j;
}

json to_json(const DecoratedClass& c) {
    json j;
    j["g"] = c.g();
    j["n"] = c.n();
    j["legs"] = c.legs();
    int deg = c.degree();
    if (deg >= 0) j["degree"] = deg;
    else if (deg == -2) j["degree"] = "mixed";
    json terms = json::array();
    for (auto& [key, e] : c.terms()) {
        json t;
        t["coeff"] = to_json(e.coeff);
        t["graph"] = to_json(e.term.graph);
        json psi = json::object();
        for (auto& [l, x] : e.term.psi)
            if (x) psi[std::to_string(l)] = x;
        t["psi"] = psi;
        json kappa = json::object();
        for (std::size_t v = 0; v < e.term.kappa.size(); ++v)
            if (!e.term.kappa[v].empty()) kappa[std::to_string(v)] = e.term.kappa[v];
        t["kappa"] = kappa;
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

DecoratedClass class_from_json(const json& j) {
    int g = j.at("g");
    auto legs = j.at("legs").get<std::vector<int>>();
    DecoratedClass c(g, legs);
    for (auto& t : j.at("terms")) {
        DecoratedTerm term;
        term.graph = graph_from_json(t.at("graph"));
        term.kappa.assign(term.graph.num_vertices(), {});
        for (auto& [k, v] : t.at("psi").items()) term.psi[std::stoi(k)] = v.get<int>();
        for (auto& [k, v] : t.at("kappa").items()) {
            int vx = std::stoi(k);
            if (vx < 0 || vx >= term.graph.num_vertices()) throw std::invalid_argument("kappa vertex out of range");
            term.kappa[vx] = v.get<std::vector<int>>();
        }
        c.add(rational_from_json(t.at("coeff")), term);
    }
    return c;
}

json to_json(const ProductClass& pc) {
    json j;
    j["graph"] = to_json(pc.gamma);
    json entries = json::array();
    for (auto& e : pc.entries) {
        json f = json::array();
        for (auto& x : e.factors) f.push_back(to_json(x));
        entries.push_back({{"coeff", to_json(e.coeff)}, {"factors", f}});
    }
    j["entries"] = entries;
    if (pc.symbolic) {
        j["symbolic"] = true;
        j["notes"] = pc.notes;
    }
    return j;
}

json to_json(const RecursionTrace& t) {
    json nodes = json::array();
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        auto& n = t.nodes[i];
        json x;
        x["id"] = i;
        x["request"] = n.request;
        x["kind"] = n.kind;
        x["rule"] = n.rule;
        if (!n.detail.empty()) x["detail"] = n.detail;
        x["children"] = n.children;
        if (n.symbolic) x["symbolic"] = true;
        nodes.push_back(x);
    }
    return {{"root", t.root}, {"nodes", nodes}};
}

json to_json(const PullbackResult& p) {
    json j;
    j["graph"] = to_json(p.gamma);
    json terms = json::array();
    for (auto& t : p.terms) {
        json x;
        x["source"] = t.source;
        x["level_graph"] = to_json(t.graph);
        x["structures"] = t.structures;
        x["coeff_per_structure"] = to_json(t.coeff_per_structure);
        if (!t.note.empty()) x["note"] = t.note;
        json entries = json::array();
        for (auto& e : t.contribution.entries) {
            json f = json::array();
            for (auto& c : e.factors) f.push_back(to_json(c));
            entries.push_back({{"coeff", to_json(e.coeff)}, {"factors", f}});
        }
        x["entries"] = entries;
        terms.push_back(x);
    }
    j["terms"] = terms;
    j["even_vanishing"] = p.even_vanishing;
    j["symbolic"] = p.symbolic;
    j["total"] = to_json(p.total);
    return j;
}

json to_json(const ResidueExpansion& e) {
    json j;
    j["rule"] = e.rule;
    j["ambient"] = to_json(e.ambient);
    j["removed"] = residues_json({e.removed}, {e.ambient.legs()}).at(0);
    if (e.reference_leg) j["reference_leg"] = e.reference_leg;
    json terms = json::array();
    for (auto& t : e.terms) {
        if (t.kind == ExpansionTerm::Kind::Psi)
            terms.push_back({{"coeff", to_json(t.coeff)}, {"psi", t.leg}});
        else
            terms.push_back({{"coeff", to_json(t.coeff)}, {"divisor", to_json(t.graph)}});
    }
    j["terms"] = terms;
    j["dropped_even"] = e.dropped_even;
    return j;
}

json fingerprint_json(const DecoratedClass& c, int degree) {
    json out = json::array();
    if (degree < 0 || degree > c.dim()) return out;
    auto dual = chains_of_degree(c.g(), c.legs(), c.dim() - degree);
    auto fp = fingerprint(c, dual);
    for (std::size_t i = 0; i < dual.size(); ++i) out.push_back({{"probe", chain_name(dual[i])}, {"value", to_json(fp[i])}});
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("not an integer: '" + item + "'");
        }
        if (pos != item.size()) throw std::invalid_argument("not an integer: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

ResidueCondition parse_residue(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos || s.substr(colon + 1) != "0")
        throw std::invalid_argument("residue condition must end in ':0', got '" + s + "'");
    std::string lhs = s.substr(0, colon);
    ResidueCondition c;
    std::size_t i = 0;
    while (i < lhs.size()) {
        int sign = 1;
        if (lhs[i] == '+' || lhs[i] == '-') {
            sign = lhs[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t j = i;
        while (j < lhs.size() && lhs[j] != '+' && lhs[j] != '-') ++j;
        std::string tok = lhs.substr(i, j - i);
        if (tok.empty()) throw std::invalid_argument("empty term in residue condition '" + s + "'");
        Rational w(1);
        auto star = tok.find('*');
        if (star != std::string::npos) {
            w = Rational::parse(tok.substr(0, star));
            tok = tok.substr(star + 1);
        }
        auto label = parse_int_list(tok);
        if (label.size() != 1 || label[0] < 1) throw std::invalid_argument("bad marking in residue condition '" + s + "'");
        c[label[0]] += Rational(sign) * w;
        i = j;
    }
    for (auto it = c.begin(); it != c.end();)
        it = it->second.is_zero() ? c.erase(it) : std::next(it);
    if (c.empty()) throw std::invalid_argument("trivial residue condition '" + s + "'");
    return c;
}

}  // namespace spinstrata
