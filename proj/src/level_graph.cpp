#include "spinstrata/level_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

bool Signature::even_type() const {
    return std::all_of(orders.begin(), orders.end(), [](int m) { return m % 2 == 0; });
}

bool Signature::meromorphic() const {
    return std::any_of(orders.begin(), orders.end(), [this](int m) { return m < 0 || m % k != 0; });
}

std::string Signature::problem() const {
    if (k < 1) return "k must be positive";
    if (g < 0) return "negative genus";
    long s = std::accumulate(orders.begin(), orders.end(), 0L);
    if (s != static_cast<long>(k) * (2 * g - 2)) return "orders must sum to k(2g-2)";
    if (2 * g - 2 + n() <= 0) return "unstable (g,n)";
    return "";
}

ResidueCondition residue_part(const std::vector<int>& labels) {
    ResidueCondition c;
    for (int l : labels) c[l] = Rational(1);
    return c;
}

std::vector<int> as_part(const ResidueCondition& c) {
    std::vector<int> out;
    if (c.empty()) return out;
    Rational first = c.begin()->second;
    for (auto& [l, v] : c) {
        if (v != first) return {};
        out.push_back(l);
    }
    return out;
}

// ---- residue linear algebra over a label set

namespace {

using Row = std::vector<Rational>;

Row to_row(const ResidueCondition& c, const std::vector<int>& labels) {
    Row r(labels.size());
    for (auto& [l, v] : c) {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        if (it != labels.end() && *it == l) r[it - labels.begin()] = v;
    }
    return r;
}

std::size_t rank_rows(const std::vector<Row>& rows, std::size_t cols) {
    if (rows.empty() || cols == 0) return 0;
    return RatMatrix::from_rows(rows, cols).rank();
}

// nonzero rows of the reduced echelon form
std::vector<Row> rref_rows(const std::vector<Row>& rows, std::size_t cols) {
    std::vector<Row> out;
    if (rows.empty() || cols == 0) return out;
    std::vector<std::size_t> piv;
    auto m = RatMatrix::from_rows(rows, cols).rref(&piv);
    for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(i));
    return out;
}

ResidueCondition from_row(const Row& r, const std::vector<int>& labels) {
    ResidueCondition c;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!r[i].is_zero()) c[labels[i]] = r[i];
    return c;
}

struct ResidueSystem {
    std::vector<int> poles;
    std::vector<Row> theorem;
    std::vector<Row> conditions;
};

ResidueSystem residue_system(const GeneralisedStratum& s) {
    ResidueSystem rs;
    rs.poles = s.poles();
    for (int c = 0; c < s.num_components(); ++c) {
        if (!s.has_poles(c)) continue;
        Row r(rs.poles.size());
        for (std::size_t i = 0; i < rs.poles.size(); ++i)
            if (s.component_of(rs.poles[i]) == c) r[i] = Rational(1);
        rs.theorem.push_back(r);
    }
    for (auto& c : s.residues) rs.conditions.push_back(to_row(c, rs.poles));
    return rs;
}

std::vector<Row> concat(std::vector<Row> a, const std::vector<Row>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

// ---- generalised strata

GeneralisedStratum GeneralisedStratum::connected(int g, const std::vector<int>& orders, const ResidueConditions& res,
                                                 int k) {
    std::vector<int> legs(orders.size());
    std::iota(legs.begin(), legs.end(), 1);
    return connected(g, legs, orders, res, k);
}

GeneralisedStratum GeneralisedStratum::connected(int g, const std::vector<int>& legs, const std::vector<int>& orders,
                                                 const ResidueConditions& res, int k) {
    if (legs.size() != orders.size()) throw std::invalid_argument("legs and orders differ in length");
    GeneralisedStratum s;
    s.components.push_back({g, legs, orders});
    s.residues = res;
    s.k = k;
    return s;
}

int GeneralisedStratum::genus() const {
    if (components.size() != 1) throw std::logic_error("genus of a disconnected stratum");
    return components[0].genus;
}

std::vector<int> GeneralisedStratum::legs() const {
    std::vector<int> out;
    for (auto& c : components) out.insert(out.end(), c.legs.begin(), c.legs.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> GeneralisedStratum::orders_of_legs() const {
    std::vector<int> out;
    for (int l : legs()) out.push_back(order_of(l));
    return out;
}

int GeneralisedStratum::order_of(int label) const {
    for (auto& c : components)
        for (std::size_t i = 0; i < c.legs.size(); ++i)
            if (c.legs[i] == label) return c.orders[i];
    throw std::out_of_range("unknown marking " + std::to_string(label));
}

int GeneralisedStratum::component_of(int label) const {
    for (int c = 0; c < num_components(); ++c)
        for (int l : components[c].legs)
            if (l == label) return c;
    return -1;
}

std::vector<int> GeneralisedStratum::poles() const {
    std::vector<int> out;
    for (auto& c : components)
        for (std::size_t i = 0; i < c.legs.size(); ++i)
            if (c.orders[i] < 0) out.push_back(c.legs[i]);
    std::sort(out.begin(), out.end());
    return out;
}

bool GeneralisedStratum::has_poles(int comp) const {
    auto& o = components[comp].orders;
    return std::any_of(o.begin(), o.end(), [](int m) { return m < 0; });
}

int GeneralisedStratum::independent_conditions() const {
    auto rs = residue_system(*this);
    std::size_t n = rs.poles.size();
    return static_cast<int>(rank_rows(concat(rs.theorem, rs.conditions), n) - rank_rows(rs.theorem, n));
}

int GeneralisedStratum::dimension() const {
    int d = 0;
    for (int c = 0; c < num_components(); ++c) {
        auto& comp = components[c];
        d += 2 * comp.genus - 2 + static_cast<int>(comp.legs.size()) + (has_poles(c) ? 0 : 1);
    }
    return d - 1 - independent_conditions();
}

bool GeneralisedStratum::residue_forced_zero(int label) const {
    ResidueCondition e{{label, Rational(1)}};
    return condition_implied(e);
}

bool GeneralisedStratum::condition_implied(const ResidueCondition& c) const {
    auto rs = residue_system(*this);
    std::size_t n = rs.poles.size();
    auto base = concat(rs.theorem, rs.conditions);
    std::size_t r0 = rank_rows(base, n);
    base.push_back(to_row(c, rs.poles));
    return rank_rows(base, n) == r0;
}

bool GeneralisedStratum::components_linked() const {
    if (num_components() < 2) return false;
    auto rs = residue_system(*this);
    std::size_t n = rs.poles.size();
    auto w = rref_rows(concat(rs.theorem, rs.conditions), n);
    std::size_t dim_w = w.size();
    std::size_t split = 0;
    for (int c = 0; c < num_components(); ++c) {
        // dim(W ∩ Q^{P_c}) = dim W − rank of W projected away from P_c
        std::vector<Row> proj;
        for (auto& r : w) {
            Row p = r;
            for (std::size_t i = 0; i < n; ++i)
                if (component_of(rs.poles[i]) == c) p[i] = Rational(0);
            proj.push_back(p);
        }
        split += dim_w - rank_rows(proj, n);
    }
    return split != dim_w;
}

GeneralisedStratum GeneralisedStratum::component_stratum(int c) const {
    auto rs = residue_system(*this);
    std::size_t n = rs.poles.size();
    auto w = rref_rows(concat(rs.theorem, rs.conditions), n);
    std::vector<std::size_t> off;
    for (std::size_t i = 0; i < n; ++i)
        if (component_of(rs.poles[i]) != c) off.push_back(i);
    std::vector<std::vector<Rational>> ker;
    if (off.empty() || w.empty()) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            std::vector<Rational> x(w.size());
            x[j] = Rational(1);
            ker.push_back(x);
        }
    } else {
        RatMatrix a(off.size(), w.size());
        for (std::size_t r = 0; r < off.size(); ++r)
            for (std::size_t j = 0; j < w.size(); ++j) a.at(r, j) = w[j][off[r]];
        ker = a.kernel();
    }
    GeneralisedStratum out;
    out.k = k;
    out.components = {components[c]};
    std::vector<Row> rows;
    for (auto& x : ker) {
        Row r(n);
        for (std::size_t j = 0; j < w.size(); ++j)
            if (!x[j].is_zero())
                for (std::size_t i = 0; i < n; ++i) r[i] += x[j] * w[j][i];
        rows.push_back(r);
    }
    for (auto& r : rref_rows(rows, n)) out.residues.push_back(from_row(r, rs.poles));
    return out;
}

std::string GeneralisedStratum::emptiness() const {
    for (auto& c : components) {
        if (2 * c.genus - 2 + static_cast<int>(c.legs.size()) <= 0) return "unstable component";
        long s = std::accumulate(c.orders.begin(), c.orders.end(), 0L);
        if (s != static_cast<long>(k) * (2 * c.genus - 2)) return "order sum mismatch";
    }
    if (k == 1) {
        for (int p : poles())
            if (order_of(p) == -1 && residue_forced_zero(p)) return "simple pole with vanishing residue";
    }
    if (dimension() < 0) return "negative dimension";
    if (k == 1) {
        for (int ci = 0; ci < num_components(); ++ci) {
            auto& c = components[ci];
            if (c.genus != 0 || !has_poles(ci)) continue;
            bool all_zero = true;
            long bsum = 0, p = 0;
            for (std::size_t i = 0; i < c.legs.size(); ++i)
                if (c.orders[i] < 0) {
                    all_zero = all_zero && residue_forced_zero(c.legs[i]);
                    bsum -= c.orders[i];
                    ++p;
                }
            if (!all_zero) continue;
            for (int a : c.orders)
                if (a > 0 && a > bsum - p - 1) return "genus-0 stratum without residues cannot carry this zero";
        }
    }
    return "";
}

std::string GeneralisedStratum::key() const {
    std::ostringstream os;
    os << "k" << k;
    for (auto& c : components) {
        os << "|g" << c.genus << ":";
        for (std::size_t i = 0; i < c.legs.size(); ++i) os << c.legs[i] << "=" << c.orders[i] << ",";
    }
    auto rs = residue_system(*this);
    auto rows = rref_rows(concat(rs.theorem, rs.conditions), rs.poles.size());
    os << "|R";
    for (auto& r : rows) {
        os << "[";
        for (std::size_t i = 0; i < r.size(); ++i)
            if (!r[i].is_zero()) os << rs.poles[i] << ":" << r[i].str() << ",";
        os << "]";
    }
    return os.str();
}

std::string GeneralisedStratum::describe() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (c) os << " x ";
        os << "H_" << components[c].genus << "(";
        for (std::size_t i = 0; i < components[c].legs.size(); ++i) {
            if (i) os << ",";
            os << components[c].orders[i] << "@" << components[c].legs[i];
        }
        os << ")";
    }
    for (auto& r : residues) {
        os << " {";
        bool first = true;
        for (auto& [l, v] : r) {
            if (!first) os << "+";
            first = false;
            if (v != Rational(1)) os << v.str() << "*";
            os << "r" << l;
        }
        os << "=0}";
    }
    return os.str();
}

// ---- enhanced level graphs

bool EnhancedLevelGraph::is_vertical_two_level() const {
    for (int e = 0; e < base.num_edges(); ++e)
        if (is_horizontal(e)) return false;
    bool top = false, bot = false;
    for (int l : level) (l == 0 ? top : bot) = true;
    return top && bot;
}

int EnhancedLevelGraph::node_order(int half) const {
    for (int e = 0; e < base.num_edges(); ++e) {
        auto [a, b] = base.edges[e];
        if (a != half && b != half) continue;
        if (is_horizontal(e)) return -k;
        return half == upper_half(e) ? kappa[e] - k : -kappa[e] - k;
    }
    throw std::out_of_range("not an edge half");
}

int EnhancedLevelGraph::upper_half(int e) const {
    auto [a, b] = base.edges[e];
    return level[base.vertex_of(a)] >= level[base.vertex_of(b)] ? a : b;
}

int EnhancedLevelGraph::lower_half(int e) const {
    auto [a, b] = base.edges[e];
    return upper_half(e) == a ? b : a;
}

std::vector<int> EnhancedLevelGraph::vertices_at(int lvl) const {
    std::vector<int> out;
    for (int v = 0; v < base.num_vertices(); ++v)
        if (level[v] == lvl) out.push_back(v);
    return out;
}

std::vector<int> EnhancedLevelGraph::vertical_kappas() const {
    std::vector<int> out;
    for (int e = 0; e < base.num_edges(); ++e)
        if (!is_horizontal(e)) out.push_back(kappa[e]);
    return out;
}

std::uint64_t EnhancedLevelGraph::ell() const {
    std::vector<long> ks;
    for (int x : vertical_kappas()) ks.push_back(x);
    return lcm_list(ks);
}

Rational EnhancedLevelGraph::prod_kappa() const {
    Rational p(1);
    for (int x : vertical_kappas()) p *= Rational(x);
    return p;
}

namespace {

CanonInput level_canon_input(const EnhancedLevelGraph& d) {
    CanonInput in;
    const auto& g = d.base;
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<long> k{g.genera[v], d.level[v]};
        auto legs = g.legs_at(v);
        k.push_back(static_cast<long>(legs.size()));
        k.insert(k.end(), legs.begin(), legs.end());
        k.push_back(g.valence(v));
        in.vkey.push_back(k);
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [a, b] = g.edges[e];
        in.edges.push_back({g.vertex_of(a), {d.kappa[e]}, g.vertex_of(b), {d.kappa[e]}});
    }
    return in;
}

}  // namespace

long EnhancedLevelGraph::automorphisms() const { return canonicalize(level_canon_input(*this)).automorphisms; }

std::string EnhancedLevelGraph::key() const {
    return encoding_string(canonicalize(level_canon_input(*this)).encoding);
}

std::vector<std::string> EnhancedLevelGraph::violations() const {
    std::vector<std::string> out;
    auto legs = base.legs();
    for (auto& v : validate_stable_graph(base, base.genus(), legs)) out.push_back(v.what);
    if (!out.empty()) return out;
    if (static_cast<int>(level.size()) != base.num_vertices()) return {"level data mismatch"};
    if (static_cast<int>(kappa.size()) != base.num_edges()) return {"enhancement data mismatch"};
    if (vertices_at(0).empty()) out.push_back("level 0 is empty");
    for (int l : level)
        if (l > 0) out.push_back("positive level");
    for (int l : legs)
        if (!orders.count(l)) out.push_back("leg without order");
    for (int e = 0; e < base.num_edges(); ++e) {
        auto [a, b] = base.edges[e];
        int la = level[base.vertex_of(a)], lb = level[base.vertex_of(b)];
        if (is_horizontal(e) && la != lb) out.push_back("horizontal edge across levels");
        if (!is_horizontal(e) && la == lb) out.push_back("vertical edge within a level");
        if (kappa[e] < 0) out.push_back("negative enhancement");
    }
    if (!out.empty()) return out;
    for (int v = 0; v < base.num_vertices(); ++v) {
        long s = 0;
        for (int h : base.halves[v]) s += base.is_leg(h) ? orders.at(h) : node_order(h);
        if (s != static_cast<long>(k) * (2 * base.genera[v] - 2)) out.push_back("vertex order sum mismatch");
    }
    return out;
}

std::string EnhancedLevelGraph::describe() const {
    std::ostringstream os;
    for (int v = 0; v < base.num_vertices(); ++v) {
        if (v) os << " ";
        os << "v" << v << "[g" << base.genera[v] << ",L" << level[v] << ":";
        bool first = true;
        for (int h : base.halves[v]) {
            if (!first) os << ",";
            first = false;
            if (base.is_leg(h)) os << h << "=" << orders.at(h);
            else os << "h" << h << "=" << node_order(h);
        }
        os << "]";
    }
    for (int e = 0; e < base.num_edges(); ++e) {
        os << " e" << base.edges[e].first << "-" << base.edges[e].second;
        if (is_horizontal(e)) os << "(hor)";
        else os << "(k" << kappa[e] << ")";
    }
    return os.str();
}

EnhancedLevelGraph canonical_level_graph(const EnhancedLevelGraph& d) {
    CanonResult r = canonicalize(level_canon_input(d));
    const auto& g = d.base;
    int next = 0;
    for (int l : g.legs()) next = std::max(next, l);
    ++next;
    EnhancedLevelGraph out;
    out.orders = d.orders;
    out.residues = d.residues;
    out.k = d.k;
    int nv = g.num_vertices();
    out.base.genera.resize(nv);
    out.base.halves.resize(nv);
    out.level.resize(nv);
    for (int p = 0; p < nv; ++p) {
        int v = r.vertex_order[p];
        out.base.genera[p] = g.genera[v];
        out.base.halves[p] = g.legs_at(v);
        out.level[p] = d.level[v];
    }
    for (auto& [e, sw] : r.edge_order) {
        auto [a, b] = g.edges[e];
        if (sw) std::swap(a, b);
        int va = r.new_index[g.vertex_of(a)], vb = r.new_index[g.vertex_of(b)];
        int la = next++, lb = next++;
        out.base.halves[va].push_back(la);
        out.base.halves[vb].push_back(lb);
        out.base.edges.push_back({la, lb});
        out.kappa.push_back(d.kappa[e]);
    }
    for (auto& hs : out.base.halves) std::sort(hs.begin(), hs.end());
    return out;
}

Enhancement enhancement_from_orders(int upper, int lower, int k) {
    Enhancement e;
    if (upper + lower != -2 * k) return e;
    if (upper == -k) {
        e.kind = Enhancement::Kind::Horizontal;
        return e;
    }
    if (upper < -k) return e;
    e.kind = Enhancement::Kind::Vertical;
    e.kappa = upper + k;
    return e;
}

Rational prong_matching_class_count(const std::vector<int>& kappas) {
    Rational p(1);
    std::vector<long> ks;
    for (int x : kappas) {
        if (x <= 0) throw std::invalid_argument("prong count needs positive enhancements");
        p *= Rational(x);
        ks.push_back(x);
    }
    Rational q = p / Rational(mpz_class(std::to_string(lcm_list(ks))));
    if (!q.is_integer()) throw std::logic_error("non-integral prong class count");
    return q;
}

Rational prong_matching_class_count(const EnhancedLevelGraph& d) {
    for (int e = 0; e < d.base.num_edges(); ++e)
        if (d.is_horizontal(e)) throw std::invalid_argument("prong matching count on a graph with horizontal edges");
    return prong_matching_class_count(d.vertical_kappas());
}

// ---- level strata

namespace {

std::vector<int> top_marked_poles(const EnhancedLevelGraph& d) {
    std::vector<int> out;
    for (int v : d.vertices_at(0))
        for (int l : d.base.legs_at(v))
            if (d.orders.at(l) < 0) out.push_back(l);
    std::sort(out.begin(), out.end());
    return out;
}

StratumComponent level_component(const EnhancedLevelGraph& d, int v) {
    StratumComponent c;
    c.genus = d.base.genera[v];
    for (int h : d.base.halves[v]) {
        c.legs.push_back(h);
        c.orders.push_back(d.base.is_leg(h) ? d.orders.at(h) : d.node_order(h));
    }
    return c;
}

}  // namespace

LevelExtract extract_level_stratum(const EnhancedLevelGraph& d, Level which) {
    if (!d.is_vertical_two_level()) throw std::invalid_argument("level extraction needs a vertical two-level graph");
    LevelExtract out;
    out.stratum.k = d.k;
    if (which == Level::Top) {
        auto tops = d.vertices_at(0);
        for (int v : tops) out.stratum.components.push_back(level_component(d, v));
        auto tp = top_marked_poles(d);
        std::vector<Row> rows;
        for (auto& c : d.residues) rows.push_back(to_row(c, tp));
        for (auto& r : rref_rows(rows, tp.size())) out.stratum.residues.push_back(from_row(r, tp));
        return out;
    }
    auto tops = d.vertices_at(0);
    auto bots = d.vertices_at(-1);
    for (int v : bots) out.stratum.components.push_back(level_component(d, v));
    auto bp = out.stratum.poles();
    auto tp = top_marked_poles(d);
    // edges into each top vertex, by lower half
    std::vector<std::vector<int>> into(tops.size());
    for (int e = 0; e < d.base.num_edges(); ++e) {
        int up = d.base.vertex_of(d.upper_half(e));
        auto it = std::find(tops.begin(), tops.end(), up);
        into[it - tops.begin()].push_back(d.lower_half(e));
    }
    std::vector<Row> rows;
    // pure GRC parts: top vertices without marked poles
    for (std::size_t y = 0; y < tops.size(); ++y) {
        bool poles = false;
        for (int l : d.base.legs_at(tops[y])) poles = poles || d.orders.at(l) < 0;
        if (poles) continue;
        auto part = into[y];
        std::sort(part.begin(), part.end());
        out.grc.push_back(residue_part(part));
        rows.push_back(to_row(out.grc.back(), bp));
    }
    // (α, λ) with Σ α_i R_i restricted to top poles = Σ λ_Y 1_Y
    std::size_t m = d.residues.size(), t = tops.size();
    if (m > 0) {
        RatMatrix a(tp.size(), m + t);
        for (std::size_t pi = 0; pi < tp.size(); ++pi) {
            for (std::size_t i = 0; i < m; ++i) {
                auto it = d.residues[i].find(tp[pi]);
                if (it != d.residues[i].end()) a.at(pi, i) = it->second;
            }
            int y = static_cast<int>(std::find(tops.begin(), tops.end(), d.base.vertex_of(tp[pi])) - tops.begin());
            a.at(pi, m + y) = Rational(-1);
        }
        std::vector<std::vector<Rational>> ker;
        if (tp.empty()) {
            for (std::size_t j = 0; j < m + t; ++j) {
                std::vector<Rational> v(m + t);
                v[j] = Rational(1);
                ker.push_back(v);
            }
        } else {
            ker = a.kernel();
        }
        for (auto& x : ker) {
            ResidueCondition c;
            for (std::size_t i = 0; i < m; ++i)
                if (!x[i].is_zero())
                    for (auto& [l, v] : d.residues[i])
                        if (std::binary_search(bp.begin(), bp.end(), l)) c[l] += x[i] * v;
            for (std::size_t y = 0; y < t; ++y)
                if (!x[m + y].is_zero())
                    for (int h : into[y]) c[h] += x[m + y];
            Row r = to_row(c, bp);
            auto trial = rows;
            trial.push_back(r);
            if (rank_rows(trial, bp.size()) > rank_rows(rows, bp.size())) rows.push_back(r);
        }
    }
    out.stratum.residues = out.grc;
    for (std::size_t i = out.grc.size(); i < rows.size(); ++i) out.stratum.residues.push_back(from_row(rows[i], bp));
    return out;
}

GeneralisedStratum horizontal_level_stratum(const EnhancedLevelGraph& d) {
    GeneralisedStratum s;
    s.k = d.k;
    for (int v = 0; v < d.base.num_vertices(); ++v) s.components.push_back(level_component(d, v));
    s.residues = d.residues;
    for (int e = 0; e < d.base.num_edges(); ++e)
        if (d.is_horizontal(e)) s.residues.push_back(residue_part({d.base.edges[e].first, d.base.edges[e].second}));
    return s;
}

int top_condition_rank(const EnhancedLevelGraph& d, const ResidueCondition* extra) {
    auto tp = top_marked_poles(d);
    std::vector<Row> rows;
    for (int v : d.vertices_at(0)) {
        Row r(tp.size());
        bool any = false;
        for (std::size_t i = 0; i < tp.size(); ++i)
            if (d.base.vertex_of(tp[i]) == v) r[i] = Rational(1), any = true;
        if (any) rows.push_back(r);
    }
    for (auto& c : d.residues) rows.push_back(to_row(c, tp));
    if (extra) rows.push_back(to_row(*extra, tp));
    return static_cast<int>(rank_rows(rows, tp.size()));
}

// ---- enumeration

namespace {

struct EnumOptions {
    int bottom_count = -1;       // -1: any
    bool poles_on_bottom_only = false;
    bool top_divisible = false;  // top-level orders divisible by k
    bool check_levels = true;
};

struct Edge2 {
    int t, b;
};

void enumerate_vertical(const GeneralisedStratum& s, const EnumOptions& opt,
                        const std::function<void(EnhancedLevelGraph)>& emit) {
    if (s.num_components() != 1) throw std::invalid_argument("level graph enumeration needs a connected stratum");
    const auto& comp = s.components[0];
    int g = comp.genus, n = static_cast<int>(comp.legs.size()), k = s.k;
    int maxv = 2 * g - 2 + n;
    int base_label = 0;
    for (int l : comp.legs) base_label = std::max(base_label, l);
    for (int T = 1; T < maxv; ++T)
        for (int B = 1; T + B <= maxv; ++B) {
            if (opt.bottom_count >= 0 && B != opt.bottom_count) continue;
            int V = T + B;
            std::vector<int> assign(n, 0);
            std::function<void(int)> legs_rec;
            std::vector<int> gen(V, 0);
            std::function<void(int, int)> gen_rec;
            std::vector<int> mult(T * B, 0);
            std::function<void(int, int)> mult_rec;
            std::vector<long> legsum(V);
            std::vector<int> nlegs(V);

            auto finish_multiplicities = [&]() {
                // connectivity
                std::vector<int> parent(V);
                std::iota(parent.begin(), parent.end(), 0);
                std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
                std::vector<int> deg(V, 0);
                for (int t = 0; t < T; ++t)
                    for (int b = 0; b < B; ++b)
                        if (mult[t * B + b] > 0) {
                            parent[find(t)] = find(T + b);
                            deg[t] += mult[t * B + b];
                            deg[T + b] += mult[t * B + b];
                        }
                for (int v = 1; v < V; ++v)
                    if (find(v) != find(0)) return;
                std::vector<long> need(V);
                for (int v = 0; v < V; ++v) {
                    if (2 * gen[v] - 2 + nlegs[v] + deg[v] <= 0) return;
                    if (v < T) need[v] = static_cast<long>(k) * (2 * gen[v] - 2) - legsum[v] + static_cast<long>(k) * deg[v];
                    else need[v] = legsum[v] - static_cast<long>(k) * (2 * gen[v] - 2) - static_cast<long>(k) * deg[v];
                    if (need[v] < deg[v]) return;
                }
                std::vector<Edge2> edges;
                for (int t = 0; t < T; ++t)
                    for (int b = 0; b < B; ++b)
                        for (int i = 0; i < mult[t * B + b]; ++i) edges.push_back({t, T + b});
                int E = static_cast<int>(edges.size());
                std::vector<int> kap(E, 0);
                std::vector<long> rem = need;
                std::vector<int> left = deg;
                std::function<void(int)> kap_rec = [&](int i) {
                    if (i == E) {
                        for (int v = 0; v < V; ++v)
                            if (rem[v] != 0) return;
                        EnhancedLevelGraph d;
                        d.k = k;
                        d.residues = s.residues;
                        for (std::size_t j = 0; j < comp.legs.size(); ++j) d.orders[comp.legs[j]] = comp.orders[j];
                        d.base.genera = gen;
                        d.base.halves.assign(V, {});
                        d.level.assign(V, 0);
                        for (int v = T; v < V; ++v) d.level[v] = -1;
                        for (int j = 0; j < n; ++j) d.base.halves[assign[j]].push_back(comp.legs[j]);
                        int lab = base_label + 1;
                        for (int j = 0; j < E; ++j) {
                            d.base.halves[edges[j].t].push_back(lab);
                            d.base.halves[edges[j].b].push_back(lab + 1);
                            d.base.edges.push_back({lab, lab + 1});
                            d.kappa.push_back(kap[j]);
                            lab += 2;
                        }
                        if (opt.top_divisible) {
                            for (int j = 0; j < E; ++j)
                                if ((kap[j] - k) % k != 0) return;
                        }
                        if (opt.check_levels) {
                            // GRC rows are left out here; graph (J) only dies through them
                            for (Level w : {Level::Top, Level::Bottom}) {
                                auto x = extract_level_stratum(d, w);
                                x.stratum.residues.erase(x.stratum.residues.begin(),
                                                         x.stratum.residues.begin() + x.grc.size());
                                if (x.stratum.dimension() < 0) return;
                            }
                        }
                        emit(canonical_level_graph(d));
                        return;
                    }
                    const auto& e = edges[i];
                    bool same_as_prev = i > 0 && edges[i - 1].t == e.t && edges[i - 1].b == e.b;
                    int lo = same_as_prev ? kap[i - 1] : 1;
                    --left[e.t];
                    --left[e.b];
                    for (int x = lo;; ++x) {
                        // remaining edges at each endpoint need at least 1 each
                        if (rem[e.t] - x < left[e.t] || rem[e.b] - x < left[e.b]) break;
                        if (left[e.t] == 0 && rem[e.t] - x != 0) continue;
                        if (left[e.b] == 0 && rem[e.b] - x != 0) continue;
                        kap[i] = x;
                        rem[e.t] -= x;
                        rem[e.b] -= x;
                        kap_rec(i + 1);
                        rem[e.t] += x;
                        rem[e.b] += x;
                    }
                    ++left[e.t];
                    ++left[e.b];
                };
                kap_rec(0);
            };

            mult_rec = [&](int idx, int remaining) {
                if (idx == T * B) {
                    if (remaining == 0) finish_multiplicities();
                    return;
                }
                for (int m = 0; m <= remaining; ++m) {
                    mult[idx] = m;
                    mult_rec(idx + 1, remaining - m);
                }
                mult[idx] = 0;
            };

            gen_rec = [&](int v, int left_genus) {
                if (v == V) {
                    int E = left_genus + V - 1;  // h¹ = g − Σg_v
                    mult_rec(0, E);
                    return;
                }
                for (int x = 0; x <= left_genus; ++x) {
                    gen[v] = x;
                    gen_rec(v + 1, left_genus - x);
                }
                gen[v] = 0;
            };

            legs_rec = [&](int j) {
                if (j == n) {
                    std::fill(legsum.begin(), legsum.end(), 0);
                    std::fill(nlegs.begin(), nlegs.end(), 0);
                    for (int i = 0; i < n; ++i) {
                        legsum[assign[i]] += comp.orders[i];
                        ++nlegs[assign[i]];
                    }
                    gen_rec(0, g);
                    return;
                }
                for (int v = 0; v < V; ++v) {
                    if (v < T && opt.poles_on_bottom_only && comp.orders[j] < 0) continue;
                    if (v < T && opt.top_divisible && comp.orders[j] % k != 0) continue;
                    assign[j] = v;
                    legs_rec(j + 1);
                }
            };
            legs_rec(0);
        }
}

std::vector<EnhancedLevelGraph> collect(const std::map<std::string, EnhancedLevelGraph>& m) {
    std::vector<std::pair<std::tuple<int, int, std::string>, EnhancedLevelGraph>> items;
    for (auto& [key, d] : m) items.push_back({{d.base.num_edges(), d.base.num_vertices(), key}, d});
    std::sort(items.begin(), items.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<EnhancedLevelGraph> out;
    for (auto& it : items) out.push_back(it.second);
    return out;
}

}  // namespace

std::vector<EnhancedLevelGraph> enumerate_two_level_graphs(const GeneralisedStratum& s) {
    std::map<std::string, EnhancedLevelGraph> found;
    enumerate_vertical(s, EnumOptions{}, [&](EnhancedLevelGraph d) { found.emplace(d.key(), std::move(d)); });
    return collect(found);
}

std::vector<EnhancedLevelGraph> simple_star_graphs(const Signature& sig, bool odd_only) {
    if (!sig.problem().empty()) throw std::invalid_argument(sig.problem());
    if (!sig.meromorphic()) throw std::invalid_argument("simple star graphs need a meromorphic signature");
    EnumOptions opt;
    opt.bottom_count = 1;
    opt.poles_on_bottom_only = true;
    opt.top_divisible = true;
    opt.check_levels = false;
    std::map<std::string, EnhancedLevelGraph> found;
    auto s = GeneralisedStratum::connected(sig.g, sig.orders, {}, sig.k);
    enumerate_vertical(s, opt, [&](EnhancedLevelGraph d) {
        if (odd_only)
            for (int x : d.kappa)
                if (x % 2 == 0) return;
        found.emplace(d.key(), std::move(d));
    });
    return collect(found);
}

std::vector<EnhancedLevelGraph> enumerate_horizontal_one_edge(const GeneralisedStratum& s) {
    if (s.num_components() != 1) throw std::invalid_argument("level graph enumeration needs a connected stratum");
    const auto& comp = s.components[0];
    int g = comp.genus, n = static_cast<int>(comp.legs.size()), k = s.k;
    int a = 0;
    for (int l : comp.legs) a = std::max(a, l);
    int b = a + 2;
    ++a;
    std::map<std::string, EnhancedLevelGraph> found;
    auto make = [&]() {
        EnhancedLevelGraph d;
        d.k = k;
        d.residues = s.residues;
        for (int j = 0; j < n; ++j) d.orders[comp.legs[j]] = comp.orders[j];
        return d;
    };
    auto accept = [&](EnhancedLevelGraph d) {
        if (!d.violations().empty()) return;
        if (!horizontal_level_stratum(d).emptiness().empty()) return;
        auto c = canonical_level_graph(d);
        found.emplace(c.key(), c);
    };
    if (g >= 1 && 2 * (g - 1) - 2 + n + 2 > 0) {
        auto d = make();
        d.base.genera = {g - 1};
        d.base.halves = {comp.legs};
        d.base.halves[0].push_back(a);
        d.base.halves[0].push_back(b);
        d.base.edges = {{a, b}};
        d.level = {0};
        d.kappa = {0};
        accept(d);
    }
    for (int g1 = 0; g1 <= g; ++g1)
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> s1, s2;
            long sum1 = 0;
            for (int j = 0; j < n; ++j) {
                if ((mask >> j) & 1u) s1.push_back(comp.legs[j]), sum1 += comp.orders[j];
                else s2.push_back(comp.legs[j]);
            }
            if (sum1 - k != static_cast<long>(k) * (2 * g1 - 2)) continue;
            auto d = make();
            d.base.genera = {g1, g - g1};
            s1.push_back(a);
            s2.push_back(b);
            d.base.halves = {s1, s2};
            d.base.edges = {{a, b}};
            d.level = {0, 0};
            d.kappa = {0};
            accept(d);
        }
    return collect(found);
}

}  // namespace spinstrata
