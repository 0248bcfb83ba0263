#include "spinstrata/recursion.hpp"

#include "spinstrata/spin.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

std::string kind_name(ClassKind k) { return k == ClassKind::Spin ? "spin" : "plain"; }

int injectivity_range(int g, int n) {
    if (2 * g - 2 + n <= 0) throw std::invalid_argument("injectivity_range needs 2g-2+n > 0");
    if (g == 0) return 2 * n - 7;
    if (n <= 1) return 2 * g - 1;
    if (n == 2) return 2 * g;
    return 2 * g - 3 + n;
}

ResidueAnalysis analyse_residues(const GeneralisedStratum& s) {
    ResidueAnalysis a;
    std::vector<int> simple;
    for (int p : s.poles())
        if (s.order_of(p) == -1) simple.push_back(p);
    std::set<int> used;
    for (std::size_t i = 0; i < simple.size(); ++i) {
        if (used.count(simple[i])) continue;
        for (std::size_t j = i + 1; j < simple.size(); ++j) {
            if (used.count(simple[j])) continue;
            if (s.component_of(simple[i]) != s.component_of(simple[j])) continue;
            if (!s.condition_implied(residue_part({simple[i], simple[j]}))) continue;
            if (s.residue_forced_zero(simple[i])) continue;
            a.pairs.push_back({simple[i], simple[j]});
            used.insert(simple[i]);
            used.insert(simple[j]);
            break;
        }
    }
    for (int p : simple)
        if (!used.count(p)) a.unpaired.push_back(p);
    GeneralisedStratum acc = s;
    acc.residues.clear();
    for (auto [p, q] : a.pairs) acc.residues.push_back(residue_part({p, q}));
    for (auto& c : s.residues) {
        if (acc.condition_implied(c)) continue;
        a.extra.push_back(c);
        acc.residues.push_back(c);
    }
    a.admits_spin = s.k == 1 && a.unpaired.empty();
    for (auto& comp : s.components)
        for (int m : comp.orders)
            if (m != -1 && m % 2 != 0) a.admits_spin = false;
    return a;
}

int target_degree(const GeneralisedStratum& s) {
    const auto& c = s.components.at(0);
    if (s.num_components() != 1) throw std::invalid_argument("target degree of a disconnected stratum");
    return 3 * c.genus - 3 + static_cast<int>(c.legs.size()) - s.dimension();
}

namespace {

bool has_even_kappa(const EnhancedLevelGraph& d) {
    for (int x : d.vertical_kappas())
        if (x % 2 == 0) return true;
    return false;
}

int lowest_pole(const GeneralisedStratum& s, const ResidueCondition& c) {
    for (auto& [l, v] : c)
        if (!v.is_zero() && s.order_of(l) < 0) return l;
    throw std::invalid_argument("residue condition without poles");
}

ResidueConditions pair_conditions(const ResidueAnalysis& a, std::size_t skip = SIZE_MAX) {
    ResidueConditions out;
    for (std::size_t i = 0; i < a.pairs.size(); ++i)
        if (i != skip) out.push_back(residue_part({a.pairs[i].first, a.pairs[i].second}));
    return out;
}

}  // namespace

ResidueExpansion resolve_residue(const GeneralisedStratum& s, ClassKind kind, std::optional<std::size_t> which,
                                 std::optional<int> reference_leg) {
    if (s.num_components() != 1) throw std::invalid_argument("residue resolution needs a connected stratum");
    auto an = analyse_residues(s);
    std::size_t removable = an.extra.size() + (kind == ClassKind::Plain ? an.pairs.size() : 0);
    if (removable == 0) {
        if (!an.pairs.empty())
            throw std::invalid_argument("only simple-pole pairings remain; use resolve_paired_simple_poles");
        throw std::invalid_argument("no residue condition to remove");
    }
    std::size_t idx = which ? *which : (an.extra.empty() ? removable - 1 : an.extra.size() - 1);
    if (idx >= removable) {
        if (kind == ClassKind::Spin && idx < an.extra.size() + an.pairs.size())
            throw std::invalid_argument("removing a simple-pole pairing breaks the spin structure; use "
                                        "resolve_paired_simple_poles");
        throw std::out_of_range("residue condition index out of range");
    }
    ResidueExpansion e;
    e.ambient = s;
    if (idx < an.extra.size()) {
        e.removed = an.extra[idx];
        e.ambient.residues = pair_conditions(an);
        for (std::size_t i = 0; i < an.extra.size(); ++i)
            if (i != idx) e.ambient.residues.push_back(an.extra[i]);
    } else {
        std::size_t pi = idx - an.extra.size();
        e.removed = residue_part({an.pairs[pi].first, an.pairs[pi].second});
        e.ambient.residues = pair_conditions(an, pi);
        e.ambient.residues.insert(e.ambient.residues.end(), an.extra.begin(), an.extra.end());
    }
    if (kind == ClassKind::Spin && !analyse_residues(e.ambient).admits_spin)
        throw std::invalid_argument("ambient stratum admits no spin structure; use resolve_paired_simple_poles");
    int ref = reference_leg ? *reference_leg : lowest_pole(s, e.removed);
    if (s.component_of(ref) < 0) throw std::invalid_argument("reference leg is not a marking");
    e.reference_leg = ref;
    e.rule = "residue resolution";
    e.terms.push_back({ExpansionTerm::Kind::Psi, Rational(-(s.order_of(ref) + 1)), ref, {}});
    for (auto& d : enumerate_two_level_graphs(e.ambient)) {
        Rational ell(mpz_class(std::to_string(d.ell())));
        Rational c;
        if (d.level[d.base.vertex_of(ref)] == -1) c += ell;
        if (top_condition_rank(d, &e.removed) == top_condition_rank(d)) c -= ell;
        if (c.is_zero()) continue;
        if (kind == ClassKind::Spin && has_even_kappa(d)) {
            ++e.dropped_even;
            continue;
        }
        e.terms.push_back({ExpansionTerm::Kind::Divisor, c, 0, d});
    }
    return e;
}

ResidueExpansion resolve_residue_spin(const GeneralisedStratum& s, std::optional<std::size_t> which,
                                      std::optional<int> reference_leg) {
    return resolve_residue(s, ClassKind::Spin, which, reference_leg);
}

ResidueExpansion resolve_paired_simple_poles(const GeneralisedStratum& s, ClassKind kind) {
    if (s.num_components() != 1) throw std::invalid_argument("pair resolution needs a connected stratum");
    auto an = analyse_residues(s);
    if (an.pairs.empty()) throw std::invalid_argument("no paired simple poles");
    if (!an.extra.empty()) throw std::invalid_argument("resolve the other residue conditions first");
    bool negative = false;
    for (int l : s.legs())
        if (s.order_of(l) < -1) negative = true;
    if (!negative) throw std::invalid_argument("no pole of order at least 2; handled by the base cases");
    auto [p1, p2] = an.pairs.front();
    ResidueExpansion e;
    e.ambient = s;
    e.ambient.residues = pair_conditions(an, 0);
    e.removed = residue_part({p1, p2});
    e.rule = "paired-pole resolution";
    for (auto& d : enumerate_two_level_graphs(e.ambient)) {
        bool t1 = d.level[d.base.vertex_of(p1)] == 0, t2 = d.level[d.base.vertex_of(p2)] == 0;
        Rational ell(mpz_class(std::to_string(d.ell())));
        Rational c;
        if (t1 && t2 && top_condition_rank(d, &e.removed) == top_condition_rank(d)) c = -ell;
        else if (kind == ClassKind::Plain && t1 && !t2) c = ell;
        if (c.is_zero()) continue;
        if (kind == ClassKind::Spin && has_even_kappa(d)) {
            ++e.dropped_even;
            continue;
        }
        e.terms.push_back({ExpansionTerm::Kind::Divisor, c, 0, d});
    }
    return e;
}

std::optional<DecoratedClass> spin_base_class(const GeneralisedStratum& s) {
    if (s.num_components() != 1 || s.genus() != 0 || s.k != 1) return std::nullopt;
    auto legs = s.legs();
    auto an = analyse_residues(s);
    if (!an.admits_spin || !an.extra.empty()) return std::nullopt;
    auto fund = DecoratedClass::fundamental(0, legs);
    if (an.pairs.empty()) return fund;
    if (an.pairs.size() != 1) return std::nullopt;
    std::vector<int> rest;
    for (int l : legs)
        if (l != an.pairs[0].first && l != an.pairs[0].second) rest.push_back(l);
    if (rest.size() == 1 && s.order_of(rest[0]) == 0) return Rational(-1) * fund;
    if (rest.size() == 2) {
        int a = s.order_of(rest[0]), b = s.order_of(rest[1]);
        if (a + b == 0 && a != 0) return mul_psi(fund, a > 0 ? rest[0] : rest[1]);
    }
    return std::nullopt;
}

// ---- engine

namespace {

struct StackGuard {
    std::vector<int>& stack;
    ~StackGuard() { stack.pop_back(); }
};

DecoratedClass chain_class(int g, const std::vector<int>& legs, const Chain& ch) {
    return apply_chain(DecoratedClass::fundamental(g, legs), ch);
}

std::string stratum_request(const GeneralisedStratum& s) {
    std::ostringstream os;
    os << s.describe();
    return os.str();
}

}  // namespace

int SpinEngine::open(const std::string& request, ClassKind kind, const std::string& rule) {
    TraceNode n;
    n.request = request;
    n.kind = kind_name(kind);
    n.rule = rule;
    int id = static_cast<int>(trace_.nodes.size());
    trace_.nodes.push_back(n);
    attach(id);
    if (trace_.root < 0) trace_.root = id;
    stack_.push_back(id);
    return id;
}

void SpinEngine::close(int node) {
    if (!stack_.empty() && stack_.back() == node) stack_.pop_back();
}

void SpinEngine::attach(int child) {
    if (stack_.empty()) return;
    auto& ch = trace_.nodes[stack_.back()].children;
    if (std::find(ch.begin(), ch.end(), child) == ch.end()) ch.push_back(child);
}

StratumClass SpinEngine::stratum_class(const GeneralisedStratum& s, ClassKind kind) {
    std::string key = kind_name(kind) + "|" + s.key();
    if (auto it = memo_.find(key); it != memo_.end()) {
        attach(it->second.node);
        return it->second;
    }
    int node = open(stratum_request(s), kind, "");
    StackGuard guard{stack_};
    StratumClass r = compute(s, kind, node);
    r.node = node;
    trace_.nodes[node].symbolic = r.symbolic;
    if (trace_.nodes[node].detail.empty()) trace_.nodes[node].detail = r.note;
    memo_[key] = r;
    return r;
}

StratumClass SpinEngine::compute(const GeneralisedStratum& s, ClassKind kind, int node) {
    auto set_rule = [&](const std::string& rule, const std::string& detail) {
        trace_.nodes[node].rule = rule;
        trace_.nodes[node].detail = detail;
    };
    StratumClass r;
    if (s.num_components() > 1) {
        if (auto why = s.emptiness(); !why.empty()) {
            set_rule("empty/zero", why);
            return r;
        }
        if (!s.components_linked()) {
            set_rule("empty/zero", "components scale independently; the image has lower dimension");
            return r;
        }
        r.symbolic = true;
        r.note = "level with residue-linked components";
        set_rule("symbolic", r.note);
        return r;
    }
    int g = s.genus();
    auto legs = s.legs();
    r.cls = DecoratedClass(g, legs);
    if (auto why = s.emptiness(); !why.empty()) {
        set_rule("empty/zero", why);
        return r;
    }
    auto an = analyse_residues(s);
    if (kind == ClassKind::Spin && !an.admits_spin)
        throw std::invalid_argument("no spin structure on " + s.describe() +
                                    ": needs even type up to paired simple poles");
    if (!an.extra.empty()) {
        auto e = resolve_residue(s, kind);
        std::ostringstream os;
        os << "removed one condition, reference leg " << e.reference_leg << ", " << e.terms.size() << " terms";
        if (e.dropped_even) os << ", " << e.dropped_even << " even-enhancement graphs dropped";
        set_rule("residue resolution", os.str());
        auto out = evaluate_expansion(e, kind);
        out.node = node;
        return out;
    }
    if (g == 0 && an.pairs.empty()) {
        set_rule("base case", "genus 0 without paired poles: fundamental class");
        r.cls = DecoratedClass::fundamental(0, legs);
        return r;
    }
    if (kind == ClassKind::Spin) {
        if (auto b = spin_base_class(s)) {
            set_rule("base case", "genus-0 paired-pole base");
            r.cls = *b;
            return r;
        }
    } else if (g == 0 && legs.size() == 3 && an.pairs.size() == 1) {
        set_rule("base case", "single point");
        r.cls = DecoratedClass::fundamental(0, legs);
        return r;
    }
    bool negative = false;
    for (int l : legs)
        if (s.order_of(l) < -1) negative = true;
    if (!an.pairs.empty() && negative) {
        auto e = resolve_paired_simple_poles(s, kind);
        std::ostringstream os;
        os << "pair (" << an.pairs[0].first << "," << an.pairs[0].second << "), " << e.terms.size() << " terms";
        if (e.dropped_even) os << ", " << e.dropped_even << " even-enhancement graphs dropped";
        set_rule("paired-pole resolution", os.str());
        auto out = evaluate_expansion(e, kind);
        out.node = node;
        return out;
    }
    if (g >= 2) {
        r.symbolic = true;
        r.note = "genus " + std::to_string(g) + " is beyond the evaluated range (needs a tautological basis)";
        set_rule("symbolic", r.note);
        return r;
    }
    auto rec = reconstruct(s, kind);
    std::ostringstream os;
    os << rec.basis.size() << " candidates, " << rec.equations << " equations over " << rec.pullbacks.size()
       << " graphs";
    set_rule("clutching system", os.str());
    r.cls = rec.cls;
    r.symbolic = rec.symbolic;
    if (rec.symbolic) r.note = rec.diagnostics;
    return r;
}

StratumClass SpinEngine::evaluate_expansion(const ResidueExpansion& e, ClassKind kind) {
    StratumClass out;
    int g = e.ambient.genus();
    out.cls = DecoratedClass(g, e.ambient.legs());
    std::optional<StratumClass> ambient;
    for (auto& t : e.terms) {
        if (t.kind == ExpansionTerm::Kind::Psi) {
            if (t.coeff.is_zero()) continue;
            if (!ambient) ambient = stratum_class(e.ambient, kind);
            if (ambient->symbolic) {
                out.symbolic = true;
                out.note = ambient->note;
                continue;
            }
            out.cls += t.coeff * mul_psi(ambient->cls, t.leg);
            continue;
        }
        auto d = divisor_pushforward(t.graph, kind);
        if (d.symbolic) {
            out.symbolic = true;
            out.note = d.note;
            continue;
        }
        out.cls += t.coeff * d.cls;
    }
    if (out.symbolic) out.cls = DecoratedClass(g, e.ambient.legs());
    return out;
}

SpinEngine::LevelFactors SpinEngine::level_factors(const EnhancedLevelGraph& d, ClassKind kind) {
    LevelFactors lf;
    lf.per_vertex.resize(d.base.num_vertices());
    for (Level which : {Level::Top, Level::Bottom}) {
        auto ex = extract_level_stratum(d, which);
        auto c = stratum_class(ex.stratum, kind);
        if (c.symbolic) {
            lf.symbolic = true;
            lf.note = c.note;
            continue;
        }
        if (ex.stratum.num_components() > 1 || c.cls.is_zero()) {
            lf.zero = true;
            if (lf.note.empty()) lf.note = which == Level::Top ? "top level vanishes" : "bottom level vanishes";
            continue;
        }
        auto vs = d.vertices_at(which == Level::Top ? 0 : -1);
        lf.per_vertex[vs.at(0)] = c.cls;
    }
    return lf;
}

std::vector<DecoratedClass> SpinEngine::gamma_factors(const StableGraph& delta, const StableGraph& gamma,
                                                      const GraphContraction& f,
                                                      const std::vector<DecoratedClass>& per_vertex) {
    std::vector<DecoratedClass> out;
    for (int w = 0; w < gamma.num_vertices(); ++w) {
        auto piece = contraction_piece(delta, gamma, f, w);
        std::vector<DecoratedClass> fs;
        for (int v : piece.vertices) {
            std::map<int, int> m;
            for (int h : delta.halves[v]) m[h] = piece.label_map.at(h);
            fs.push_back(per_vertex[v].relabel(m));
        }
        out.push_back(clutch_pushforward(fs, piece.graph));
    }
    return out;
}

StratumClass SpinEngine::divisor_pushforward(const EnhancedLevelGraph& d, ClassKind kind) {
    StratumClass out;
    out.cls = DecoratedClass(d.base.genus(), d.base.legs());
    if (kind == ClassKind::Spin && has_even_kappa(d)) {
        out.note = "even enhancement";
        return out;
    }
    auto lf = level_factors(d, kind);
    if (lf.symbolic) {
        out.symbolic = true;
        out.note = lf.note;
        return out;
    }
    if (lf.zero) {
        out.note = lf.note;
        return out;
    }
    Rational c = d.prod_kappa() / (Rational(d.automorphisms()) * Rational(mpz_class(std::to_string(d.ell()))));
    out.cls = c * clutch_pushforward(lf.per_vertex, d.base);
    return out;
}

PullbackResult SpinEngine::clutching_pullback(const GeneralisedStratum& s, const StableGraph& gamma, ClassKind kind) {
    if (s.num_components() != 1) throw std::invalid_argument("clutching pullback needs a connected stratum");
    if (gamma.num_edges() != 1) throw std::invalid_argument("clutching pullback needs a one-edge graph");
    if (gamma.legs() != s.legs() || gamma.genus() != s.genus())
        throw std::invalid_argument("graph does not match the stratum's genus and markings");
    if (kind == ClassKind::Spin && !analyse_residues(s).admits_spin)
        throw std::invalid_argument("no spin structure on " + s.describe());
    PullbackResult res;
    res.gamma = gamma;
    res.total.gamma = gamma;
    Rational inv_aut = Rational(1) / Rational(automorphism_order(gamma));

    for (auto& h : enumerate_horizontal_one_edge(s)) {
        auto fs = enumerate_gamma_structures(h.base, gamma);
        if (fs.empty()) continue;
        PullbackTerm term;
        term.source = "horizontal";
        term.graph = h;
        term.structures = static_cast<int>(fs.size());
        term.contribution.gamma = gamma;
        auto whole = horizontal_level_stratum(h);
        std::vector<DecoratedClass> per_vertex;
        Rational sign(1);
        bool symbolic = false, zero = false;
        if (h.base.num_vertices() == 1) {
            auto c = stratum_class(whole, kind);
            symbolic = c.symbolic;
            zero = c.zero();
            per_vertex.push_back(c.cls);
            term.note = "self-node";
        } else {
            int node = open("join of " + whole.describe(), kind, "horizontal join");
            StackGuard guard{stack_};
            for (int c = 0; c < whole.num_components(); ++c) {
                auto cc = stratum_class(whole.component_stratum(c), kind);
                symbolic = symbolic || cc.symbolic;
                zero = zero || cc.zero();
                per_vertex.push_back(cc.cls);
            }
            if (kind == ClassKind::Spin) sign = Rational(horizontal_join_spin_sign());
            trace_.nodes[node].symbolic = symbolic;
            trace_.nodes[node].detail = kind == ClassKind::Spin ? "product of component classes, sign -1"
                                                                : "product of component classes";
            term.note = "compact-type join";
        }
        term.coeff_per_structure = sign * inv_aut;
        if (symbolic) {
            res.symbolic = true;
            res.total.symbolic = true;
            res.total.notes.push_back("horizontal graph " + h.describe());
        } else if (!zero) {
            for (auto& f : fs)
                term.contribution.entries.push_back({term.coeff_per_structure, gamma_factors(h.base, gamma, f, per_vertex)});
        }
        res.terms.push_back(term);
    }

    for (auto& d : enumerate_two_level_graphs(s)) {
        auto fs = enumerate_gamma_structures(d.base, gamma);
        if (fs.empty()) continue;
        PullbackTerm term;
        term.source = "level graph";
        term.graph = d;
        term.structures = static_cast<int>(fs.size());
        term.contribution.gamma = gamma;
        term.coeff_per_structure = d.prod_kappa() / Rational(d.automorphisms());
        if (kind == ClassKind::Spin && has_even_kappa(d)) {
            ++res.even_vanishing;
            term.note = "even enhancement";
            res.terms.push_back(term);
            continue;
        }
        auto lf = level_factors(d, kind);
        if (lf.symbolic) {
            res.symbolic = true;
            res.total.symbolic = true;
            res.total.notes.push_back("level graph " + d.describe() + ": " + lf.note);
            term.note = lf.note;
            res.terms.push_back(term);
            continue;
        }
        if (lf.zero) {
            term.note = lf.note;
            res.terms.push_back(term);
            continue;
        }
        for (auto& f : fs) {
            int kf = d.kappa[f.edge_map.at(0)];
            Rational c = term.coeff_per_structure / Rational(kf);
            term.contribution.entries.push_back({c, gamma_factors(d.base, gamma, f, lf.per_vertex)});
        }
        res.terms.push_back(term);
    }
    for (auto& t : res.terms)
        for (auto& e : t.contribution.entries) res.total.entries.push_back(e);
    return res;
}

std::vector<StableGraph> SpinEngine::pullback_graphs(const GeneralisedStratum& s) const {
    int g = s.genus();
    auto legs = s.legs();
    std::vector<StableGraph> out;
    for (auto& gm : enumerate_one_edge_graphs(g, legs)) {
        if (gm.h1() == 1 && g > 0 && legs.size() >= 3) continue;
        out.push_back(gm);
    }
    return out;
}

std::vector<Chain> candidate_basis(int g, const std::vector<int>& legs, int degree) {
    int dim = 3 * g - 3 + static_cast<int>(legs.size());
    auto dual = chains_of_degree(g, legs, dim - degree);
    std::vector<Chain> out;
    std::vector<std::vector<Rational>> rows;
    std::size_t rank = 0;
    for (auto& ch : chains_of_degree(g, legs, degree)) {
        auto f = fingerprint(chain_class(g, legs, ch), dual);
        auto trial = rows;
        trial.push_back(f);
        std::size_t r = RatMatrix::from_rows(trial, dual.size()).rank();
        if (r > rank) {
            rows = trial;
            rank = r;
            out.push_back(ch);
        }
    }
    return out;
}

namespace {

struct ClutchingSystem {
    RatMatrix a;
    std::vector<Rational> b;
    std::vector<std::string> row_labels;
};

void append_rows(std::vector<std::vector<Rational>>& rows, std::vector<Rational>* rhs, std::vector<std::string>& labels,
                 const StableGraph& gamma, int degree, const std::vector<Chain>& basis, const ProductClass* pb) {
    int dim_gamma = 0;
    for (int w = 0; w < gamma.num_vertices(); ++w) dim_gamma += 3 * gamma.genera[w] - 3 + gamma.valence(w);
    for (auto& p : product_probes(gamma, dim_gamma - degree)) {
        auto pushed = pushforward_probe(gamma, p);
        std::vector<Rational> row;
        for (auto& ch : basis) row.push_back(pair_pullback(ch, pushed));
        rows.push_back(row);
        if (rhs) rhs->push_back(pair_product(*pb, p));
        std::string name = describe(gamma) + " /";
        for (auto& ch : p) name += " " + (ch.empty() ? std::string("1") : chain_name(ch));
        labels.push_back(name);
    }
}

}  // namespace

int clutching_kernel_dimension(int g, const std::vector<int>& legs, int degree, bool include_self_node) {
    auto basis = candidate_basis(g, legs, degree);
    std::vector<std::vector<Rational>> rows;
    std::vector<std::string> labels;
    for (auto& gm : enumerate_one_edge_graphs(g, legs)) {
        if (gm.h1() == 1 && !include_self_node) continue;
        append_rows(rows, nullptr, labels, gm, degree, basis, nullptr);
    }
    if (basis.empty()) return 0;
    if (rows.empty()) return static_cast<int>(basis.size());
    return static_cast<int>(basis.size() - RatMatrix::from_rows(rows, basis.size()).rank());
}

Reconstruction SpinEngine::reconstruct(const GeneralisedStratum& s, ClassKind kind) {
    std::string key = kind_name(kind) + "|" + s.key();
    if (auto it = recon_memo_.find(key); it != recon_memo_.end()) return it->second;
    Reconstruction rc;
    int g = s.genus();
    auto legs = s.legs();
    int n = static_cast<int>(legs.size());
    int D = target_degree(s);
    rc.degree = D;
    rc.cls = DecoratedClass(g, legs);
    if (g >= 2) {
        rc.symbolic = true;
        rc.diagnostics = "genus " + std::to_string(g) + " is beyond the evaluated range";
        recon_memo_[key] = rc;
        return rc;
    }
    int range = injectivity_range(g, n);
    if (2 * D > range) {
        std::ostringstream os;
        os << "cohomological degree " << 2 * D << " of " << s.describe() << " exceeds d(" << g << "," << n
           << ") = " << range << " (d = 2n-7 for g=0, 2g-1 for n<=1, 2g for n=2, 2g-3+n otherwise)";
        throw std::runtime_error(os.str());
    }
    rc.basis = candidate_basis(g, legs, D);
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<std::string> labels;
    for (auto& gm : pullback_graphs(s)) {
        auto pb = clutching_pullback(s, gm, kind);
        rc.pullbacks.push_back(pb);
        if (pb.symbolic) {
            rc.symbolic = true;
            rc.diagnostics = "symbolic pullback along " + describe(gm);
            continue;
        }
        append_rows(rows, &rhs, labels, gm, D, rc.basis, &pb.total);
    }
    rc.equations = rows.size();
    if (rc.symbolic) {
        recon_memo_[key] = rc;
        return rc;
    }
    if (rc.basis.empty()) {
        for (auto& x : rhs)
            if (!x.is_zero()) throw std::runtime_error("nonzero pullbacks but no candidate classes");
        rc.verified = true;
        recon_memo_[key] = rc;
        return rc;
    }
    auto a = RatMatrix::from_rows(rows, rc.basis.size());
    auto sol = solve_rational_system(a, rhs);
    if (sol.status == SolveResult::Status::NoSolution) {
        std::ostringstream os;
        os << "clutching system for " << s.describe() << " is inconsistent over " << rc.basis.size()
           << " candidates and " << rows.size() << " equations";
        throw std::runtime_error(os.str());
    }
    if (sol.status == SolveResult::Status::NonUnique) {
        std::ostringstream os;
        os << "clutching system for " << s.describe() << " leaves " << sol.kernel.size()
           << " candidate directions undetermined: the probes on " << pullback_graphs(s).size()
           << " one-edge graphs do not separate the " << rc.basis.size() << " candidates";
        throw std::runtime_error(os.str());
    }
    rc.coordinates = sol.solution;
    for (std::size_t j = 0; j < rc.basis.size(); ++j)
        if (!rc.coordinates[j].is_zero()) rc.cls += rc.coordinates[j] * chain_class(g, legs, rc.basis[j]);
    auto check = a.apply(rc.coordinates);
    rc.verified = check == rhs;
    std::ostringstream os;
    os << "solved " << rows.size() << " equations in " << rc.basis.size() << " unknowns; residual "
       << (rc.verified ? "zero" : "NONZERO");
    rc.diagnostics = os.str();
    if (!rc.verified) throw std::runtime_error("reconstructed class fails re-pullback: " + rc.diagnostics);
    recon_memo_[key] = rc;
    return rc;
}

// ---- free functions

SpinClassResult reconstruct_spin_class(const GeneralisedStratum& s, ClassKind kind) {
    SpinEngine e;
    SpinClassResult out;
    out.result = e.stratum_class(s, kind);
    out.trace = e.trace();
    return out;
}

PullbackResult clutching_pullback_spin(const GeneralisedStratum& s, const StableGraph& gamma, ClassKind kind) {
    SpinEngine e;
    return e.clutching_pullback(s, gamma, kind);
}

StratumClass divisor_spin_pushforward(const EnhancedLevelGraph& d, ClassKind kind) {
    SpinEngine e;
    return e.divisor_pushforward(d, kind);
}

DecoratedClass stratum_class_g0(const GeneralisedStratum& s) {
    for (auto& c : s.components)
        if (c.genus != 0) throw std::invalid_argument("stratum_class_g0 needs genus-0 components");
    SpinEngine e;
    auto r = e.stratum_class(s, ClassKind::Plain);
    if (r.symbolic) throw std::runtime_error("genus-0 class left symbolic: " + r.note);
    return r.cls;
}

StratumClass genus_one_identity(const Signature& mu) {
    if (mu.g != 1) throw std::invalid_argument("the identity is stated in genus one");
    std::vector<int> half;
    for (int m : mu.orders) {
        if (m % 2 != 0) throw std::invalid_argument("the identity needs even orders");
        half.push_back(m / 2);
    }
    SpinEngine e;
    auto full = e.stratum_class(GeneralisedStratum::connected(1, mu.orders), ClassKind::Plain);
    auto h = e.stratum_class(GeneralisedStratum::connected(1, half), ClassKind::Plain);
    StratumClass out;
    if (full.symbolic || h.symbolic) {
        out.symbolic = true;
        out.note = "plain class left symbolic";
        return out;
    }
    out.cls = full.cls - Rational(2) * h.cls;
    out.note = "g=1 identity";
    return out;
}

ConjectureSide conjecture_rhs(const Signature& mu) {
    ConjectureSide out;
    if (auto p = mu.problem(); !p.empty()) throw std::invalid_argument(p);
    std::vector<int> legs(mu.orders.size());
    for (std::size_t i = 0; i < legs.size(); ++i) legs[i] = static_cast<int>(i) + 1;
    out.cls = DecoratedClass(mu.g, legs);
    if (mu.k != 1) {
        out.symbolic = true;
        out.notes.push_back("spin classes of k-differential strata with k > 1 are not evaluated");
        return out;
    }
    if (!mu.even_type()) throw std::invalid_argument("conjecture needs even orders");
    if (!mu.meromorphic()) throw std::invalid_argument("conjecture needs a meromorphic signature");
    SpinEngine e;
    auto main = e.stratum_class(GeneralisedStratum::connected(mu.g, mu.orders, {}, mu.k), ClassKind::Spin);
    if (main.symbolic) {
        out.symbolic = true;
        out.notes.push_back("main term: " + main.note);
    } else {
        out.cls += main.cls;
    }
    for (auto& d : simple_star_graphs(mu, true)) {
        ++out.star_graphs;
        std::vector<DecoratedClass> per_vertex;
        bool symbolic = false;
        for (int v = 0; v < d.base.num_vertices(); ++v) {
            std::vector<int> vl, vo;
            for (int h : d.base.halves[v]) {
                vl.push_back(h);
                vo.push_back(d.base.is_leg(h) ? d.orders.at(h) : d.node_order(h));
            }
            auto c = e.stratum_class(GeneralisedStratum::connected(d.base.genera[v], vl, vo, {}, mu.k), ClassKind::Spin);
            if (c.symbolic) symbolic = true;
            per_vertex.push_back(c.cls);
        }
        if (symbolic) {
            out.symbolic = true;
            out.notes.push_back("star graph " + d.describe() + " has a symbolic vertex class");
            continue;
        }
        Rational c = d.prod_kappa() / Rational(d.automorphisms());
        out.cls += c * clutch_pushforward(per_vertex, d.base);
        out.notes.push_back("star graph " + d.describe() + " weight " + c.str());
    }
    if (out.symbolic) out.cls = DecoratedClass(mu.g, legs);
    return out;
}

}  // namespace spinstrata
