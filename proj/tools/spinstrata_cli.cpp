#include "spinstrata/io.hpp"
#include "spinstrata/pixton.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace spinstrata;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kEvaluated = 0, kError = 1, kSymbolic = 2 };

struct StratumArgs {
    std::string mu;
    int g = 0;
    int k = 1;
    std::vector<std::string> res;
    std::vector<std::string> pairs;

    void add_to(CLI::App* app) {
        app->add_option("--mu", mu, "orders, comma separated")->required();
        app->add_option("--g", g, "genus")->required()->check(CLI::NonNegativeNumber);
        app->add_option("--k", k, "order of the differential")->check(CLI::PositiveNumber);
        app->add_option("--res", res, "residue condition such as 3:0 or 2+3:0 (repeatable)");
        app->add_option("--pair", pairs, "two simple poles with opposite residues, e.g. 2,3 (repeatable)");
    }

    Signature signature() const {
        Signature s{g, parse_int_list(mu), k};
        if (auto p = s.problem(); !p.empty()) throw std::invalid_argument(p);
        return s;
    }

    GeneralisedStratum stratum() const {
        auto sig = signature();
        ResidueConditions rs;
        for (auto& r : res) {
            auto c = parse_residue(r);
            for (auto& [l, v] : c)
                if (l > sig.n()) throw std::invalid_argument("residue condition names marking " + std::to_string(l));
            rs.push_back(c);
        }
        for (auto& p : pairs) {
            auto ab = parse_int_list(p);
            if (ab.size() != 2) throw std::invalid_argument("--pair takes two markings");
            for (int l : ab)
                if (l < 1 || l > sig.n() || sig.orders[l - 1] != -1)
                    throw std::invalid_argument("--pair needs two simple poles, got marking " + std::to_string(l));
            rs.push_back(residue_part(ab));
        }
        for (auto& c : rs)
            for (auto& [l, v] : c)
                if (sig.orders[l - 1] >= 0)
                    throw std::invalid_argument("residue condition at marking " + std::to_string(l) +
                                                " which is not a pole");
        return GeneralisedStratum::connected(g, sig.orders, rs, k);
    }

    json echo() const {
        json j{{"mu", mu}, {"g", g}, {"k", k}};
        if (!res.empty()) j["res"] = res;
        if (!pairs.empty()) j["pair"] = pairs;
        return j;
    }
};

json manifest(const std::string& cmd, json args) {
    return {{"subcommand", cmd}, {"arguments", std::move(args)}, {"engine_version", kVersion}};
}

void emit(const json& doc, const std::string& out) {
    if (out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << doc.dump(2) << "\n";
}

json reconstruction_json(const Reconstruction& rc) {
    json basis = json::array();
    for (std::size_t i = 0; i < rc.basis.size(); ++i) {
        json b{{"candidate", chain_name(rc.basis[i])}};
        if (i < rc.coordinates.size()) b["coordinate"] = to_json(rc.coordinates[i]);
        basis.push_back(b);
    }
    json graphs = json::array();
    for (auto& p : rc.pullbacks) graphs.push_back(canonical_form(p.gamma));
    return {{"degree", rc.degree},      {"basis", basis},
            {"graphs", graphs},         {"equations", rc.equations},
            {"verified", rc.verified},  {"diagnostics", rc.diagnostics}};
}

int cmd_spin_class(const StratumArgs& sa, bool plain, const std::string& trace_file, const std::string& out) {
    auto s = sa.stratum();
    auto kind = plain ? ClassKind::Plain : ClassKind::Spin;
    SpinEngine engine;
    auto r = engine.stratum_class(s, kind);
    json echo = sa.echo();
    echo["plain"] = plain;
    json doc;
    doc["manifest"] = manifest("spin-class", echo);
    doc["stratum"] = to_json(s);
    doc["kind"] = kind_name(kind);
    doc["status"] = r.symbolic ? "symbolic" : "evaluated";
    int degree = s.num_components() == 1 ? target_degree(s) : -1;
    doc["degree"] = degree;
    if (s.num_components() == 1) {
        doc["injectivity_range"] = injectivity_range(s.genus(), static_cast<int>(s.legs().size()));
    }
    if (r.symbolic) {
        doc["note"] = r.note;
        json graphs = json::array();
        for (auto& gm : engine.pullback_graphs(s)) graphs.push_back(canonical_form(gm));
        doc["system"] = {{"unknown_degree", degree}, {"one_edge_graphs", graphs}};
    } else {
        doc["class"] = to_json(r.cls);
        doc["fingerprint"] = fingerprint_json(r.cls, degree);
        auto& root = engine.trace().nodes.at(engine.trace().root);
        if (root.rule == "clutching system") doc["reconstruction"] = reconstruction_json(engine.reconstruct(s, kind));
    }
    auto trace = to_json(engine.trace());
    if (trace_file.empty()) {
        doc["trace"] = trace;
    } else {
        emit(trace, trace_file);
        doc["trace_file"] = trace_file;
    }
    emit(doc, out);
    return r.symbolic ? kSymbolic : kEvaluated;
}

int cmd_clutch_pull(const StratumArgs& sa, const std::string& graph, int index, bool plain, const std::string& out) {
    auto s = sa.stratum();
    auto kind = plain ? ClassKind::Plain : ClassKind::Spin;
    auto graphs = enumerate_one_edge_graphs(s.genus(), s.legs());
    json echo = sa.echo();
    echo["plain"] = plain;
    if (!graph.empty()) echo["graph"] = graph;
    if (index >= 0) echo["graph_index"] = index;
    json doc;
    doc["manifest"] = manifest("clutch-pull", echo);
    doc["stratum"] = to_json(s);
    if (graph.empty() && index < 0) {
        json list = json::array();
        for (auto& gm : graphs) list.push_back(to_json(gm));
        doc["graphs"] = list;
        emit(doc, out);
        return kEvaluated;
    }
    const StableGraph* chosen = nullptr;
    for (std::size_t i = 0; i < graphs.size(); ++i)
        if ((index >= 0 && static_cast<int>(i) == index) || (!graph.empty() && canonical_form(graphs[i]) == graph))
            chosen = &graphs[i];
    if (!chosen) throw std::invalid_argument("no one-edge graph matches the request; run without --graph to list them");
    SpinEngine engine;
    auto p = engine.clutching_pullback(s, *chosen, kind);
    doc["kind"] = kind_name(kind);
    doc["status"] = p.symbolic ? "symbolic" : "evaluated";
    doc["pullback"] = to_json(p);
    if (!p.symbolic) {
        int dg = 0;
        for (int w = 0; w < chosen->num_vertices(); ++w) dg += 3 * chosen->genera[w] - 3 + chosen->valence(w);
        json fp = json::array();
        for (auto& pr : product_probes(*chosen, dg - target_degree(s))) {
            std::string name;
            for (std::size_t w = 0; w < pr.size(); ++w) name += (w ? " x " : "") + chain_name(pr[w]);
            fp.push_back({{"probe", name}, {"value", to_json(pair_product(p.total, pr))}});
        }
        doc["fingerprint"] = fp;
    }
    doc["trace"] = to_json(engine.trace());
    emit(doc, out);
    return p.symbolic ? kSymbolic : kEvaluated;
}

struct ConjectureCheck {
    json doc;
    int code = kEvaluated;
};

ConjectureCheck check_conjecture(const Signature& sig, const DecoratedClass& lhs) {
    ConjectureCheck c;
    auto rhs = conjecture_rhs(sig);
    c.doc["rhs_star_graphs"] = rhs.star_graphs;
    c.doc["rhs_notes"] = rhs.notes;
    if (rhs.symbolic) {
        c.doc["result"] = "symbolic";
        c.code = kSymbolic;
        return c;
    }
    c.doc["rhs"] = to_json(rhs.cls);
    auto probes = chains_of_degree(sig.g, lhs.legs(), lhs.dim() - sig.g);
    bool match = fingerprint(lhs, probes) == fingerprint(rhs.cls, probes);
    c.doc["probes"] = probes.size();
    c.doc["result"] = match ? "match" : "mismatch";
    c.code = match ? kEvaluated : kError;
    return c;
}

int cmd_dr(const std::string& a_str, int g, int k, bool spin, bool check, const std::string& mu, const std::string& out) {
    RamificationVector a{parse_int_list(a_str), g, k};
    if (!a.consistent()) throw std::invalid_argument("ramification vector must sum to k(2g-2+n)");
    std::vector<std::string> log;
    auto cls = spin ? spin_dr_cycle(a, &log) : dr_cycle(a, &log);
    json echo{{"a", a_str}, {"g", g}, {"k", k}, {"spin", spin}};
    if (check) echo["mu"] = mu;
    json doc;
    doc["manifest"] = manifest("dr", echo);
    doc["class"] = to_json(cls);
    doc["fingerprint"] = fingerprint_json(cls, g);
    doc["log"] = log;
    int code = kEvaluated;
    if (check) {
        if (mu.empty()) throw std::invalid_argument("--check-conjecture needs --mu");
        Signature sig{g, parse_int_list(mu), k};
        if (auto p = sig.problem(); !p.empty()) throw std::invalid_argument(p);
        auto expect = RamificationVector::from_signature(g, sig.orders, k);
        if (expect.a != a.a) throw std::invalid_argument("--a does not match the signature given by --mu");
        auto c = check_conjecture(sig, cls);
        doc["conjecture"] = c.doc;
        code = c.code;
    }
    emit(doc, out);
    return code;
}

int cmd_conjecture(const StratumArgs& sa, const std::string& out) {
    auto sig = sa.signature();
    json doc;
    doc["manifest"] = manifest("conjecture-check", sa.echo());
    auto a = RamificationVector::from_signature(sig.g, sig.orders, sig.k);
    doc["a"] = a.a;
    std::vector<std::string> log;
    auto lhs = spin_dr_cycle(a, &log);
    doc["lhs"] = to_json(lhs);
    doc["log"] = log;
    auto c = check_conjecture(sig, lhs);
    for (auto& [key, v] : c.doc.items()) doc[key] = v;
    emit(doc, out);
    return c.code;
}

int cmd_levelgraphs(const StratumArgs& sa, bool star, const std::string& out) {
    auto s = sa.stratum();
    json doc;
    json echo = sa.echo();
    echo["star"] = star;
    doc["manifest"] = manifest("levelgraphs", echo);
    doc["stratum"] = to_json(s);
    json two = json::array(), hor = json::array();
    for (auto& d : enumerate_two_level_graphs(s)) two.push_back(to_json(d));
    for (auto& d : enumerate_horizontal_one_edge(s)) hor.push_back(to_json(d));
    doc["two_level"] = two;
    doc["horizontal"] = hor;
    if (star) {
        json st = json::array();
        for (auto& d : simple_star_graphs(sa.signature(), false)) st.push_back(to_json(d));
        doc["simple_star"] = st;
    }
    emit(doc, out);
    return kEvaluated;
}

int cmd_spin_classify(const StratumArgs& sa, int parity, bool census, const std::string& out) {
    auto s = sa.stratum();
    if (!analyse_residues(s).admits_spin) throw std::invalid_argument("stratum is not of even type");
    json doc;
    json echo = sa.echo();
    echo["parity"] = parity;
    echo["census"] = census;
    doc["manifest"] = manifest("spin-classify", echo);
    json graphs = json::array();
    for (auto& d : enumerate_two_level_graphs(s)) {
        std::vector<int> vp(d.base.num_vertices());
        for (int v = 0; v < d.base.num_vertices(); ++v) vp[v] = d.base.genera[v] > 0 ? parity : 0;
        auto c = classify_spin(d, vp);
        json x;
        x["graph"] = to_json(d);
        x["vertex_parities"] = vp;
        x["kind"] = c.kind == SpinClassification::Kind::HalfHalf ? "half" : "constant";
        x["parity"] = c.kind == SpinClassification::Kind::Constant ? c.parity : 0;
        x["prong_classes"] = prong_matching_class_count(d).num().get_si();
        if (census) {
            auto order = ProngMatching::zero(d).group_order();
            if (order <= 10000) {
                auto pc = prong_parity_census(d, vp);
                x["census"] = {{"prong_matchings", order}, {"even", pc.even}, {"odd", pc.odd}};
            } else {
                x["census"] = {{"prong_matchings", order}, {"skipped", "more than 10000 prong-matchings"}};
            }
        }
        graphs.push_back(x);
    }
    doc["graphs"] = graphs;
    emit(doc, out);
    return kEvaluated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin stratum classes and double ramification cycles on moduli of curves"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string out;
    app.add_option("--out", out, "write the JSON document to a file instead of stdout");

    StratumArgs sc_args;
    bool sc_plain = false;
    std::string sc_trace;
    auto* sc = app.add_subcommand("spin-class", "class of a stratum (spin by default)");
    sc_args.add_to(sc);
    sc->add_flag("--plain", sc_plain, "the plain stratum class instead of the spin class");
    sc->add_option("--trace", sc_trace, "write the recursion trace to this file");

    StratumArgs cp_args;
    std::string cp_graph;
    int cp_index = -1;
    bool cp_plain = false;
    auto* cp = app.add_subcommand("clutch-pull", "pullback of a stratum class along a one-edge graph");
    cp_args.add_to(cp);
    cp->add_option("--graph", cp_graph, "canonical id of the one-edge graph (omit to list them)");
    cp->add_option("--graph-index", cp_index, "position in the listed one-edge graphs");
    cp->add_flag("--plain", cp_plain, "pull back the plain class");

    std::string dr_a, dr_mu;
    int dr_g = 0, dr_k = 1;
    bool dr_spin = false, dr_check = false;
    auto* dr = app.add_subcommand("dr", "double ramification cycle from Pixton's formula");
    dr->add_option("--a", dr_a, "ramification vector, comma separated")->required();
    dr->add_option("--g", dr_g, "genus")->required()->check(CLI::NonNegativeNumber);
    dr->add_option("--k", dr_k, "twist")->check(CLI::PositiveNumber);
    dr->add_flag("--spin", dr_spin, "spin variant (odd entries, even r)");
    dr->add_flag("--check-conjecture", dr_check, "compare with the star-graph sum of spin classes");
    dr->add_option("--mu", dr_mu, "signature for --check-conjecture");

    StratumArgs sp_args;
    int sp_parity = 0;
    bool sp_census = false;
    auto* sp = app.add_subcommand("spin-classify", "spin behaviour of every two-level graph");
    sp_args.add_to(sp);
    sp->add_option("--parity", sp_parity, "parity given to each positive-genus vertex")->check(CLI::Range(0, 1));
    sp->add_flag("--census", sp_census, "also count parities over all prong-matchings");

    StratumArgs lg_args;
    bool lg_star = false;
    auto* lg = app.add_subcommand("levelgraphs", "two-level and horizontal one-edge graphs of a stratum");
    lg_args.add_to(lg);
    lg->add_flag("--star", lg_star, "also list simple star graphs of the signature");

    StratumArgs cc_args;
    auto* cc = app.add_subcommand("conjecture-check", "spin DR cycle against the star-graph sum");
    cc_args.add_to(cc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kEvaluated : kError;
    }

    try {
        if (*sc) return cmd_spin_class(sc_args, sc_plain, sc_trace, out);
        if (*cp) return cmd_clutch_pull(cp_args, cp_graph, cp_index, cp_plain, out);
        if (*dr) return cmd_dr(dr_a, dr_g, dr_k, dr_spin, dr_check, dr_mu, out);
        if (*sp) return cmd_spin_classify(sp_args, sp_parity, sp_census, out);
        if (*lg) return cmd_levelgraphs(lg_args, lg_star, out);
        if (*cc) return cmd_conjecture(cc_args, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
