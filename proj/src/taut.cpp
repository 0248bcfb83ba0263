#include "spinstrata/taut.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace spinstrata {

int DecoratedTerm::degree() const {
    int d = graph.num_edges();
    for (auto& [l, e] : psi) d += e;
    for (auto& ks : kappa)
        for (int a : ks) d += a;
    return d;
}

int DecoratedTerm::psi_at(int label) const {
    auto it = psi.find(label);
    return it == psi.end() ? 0 : it->second;
}

CanonicalTerm canonical_term(const DecoratedTerm& t) {
    const StableGraph& g = t.graph;
    auto legs = g.legs();
    int base = legs.empty() ? 0 : legs.back();
    CanonInput in;
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<long> k{g.genera[v]};
        auto lv = g.legs_at(v);
        k.push_back(static_cast<long>(lv.size()));
        for (int l : lv) k.push_back(l), k.push_back(t.psi_at(l));
        auto ks = v < static_cast<int>(t.kappa.size()) ? t.kappa[v] : std::vector<int>{};
        std::sort(ks.begin(), ks.end());
        k.push_back(static_cast<long>(ks.size()));
        k.insert(k.end(), ks.begin(), ks.end());
        k.push_back(g.valence(v));
        in.vkey.push_back(k);
    }
    for (auto& [a, b] : g.edges) in.edges.push_back({g.vertex_of(a), {t.psi_at(a)}, g.vertex_of(b), {t.psi_at(b)}});
    CanonResult r = canonicalize(in);

    CanonicalTerm out;
    out.key = encoding_string(r.encoding);
    out.automorphisms = r.automorphisms;
    DecoratedTerm& c = out.term;
    int nv = g.num_vertices();
    c.graph.genera.resize(nv);
    c.graph.halves.resize(nv);
    c.kappa.resize(nv);
    for (int p = 0; p < nv; ++p) {
        int v = r.vertex_order[p];
        c.graph.genera[p] = g.genera[v];
        c.graph.halves[p] = g.legs_at(v);
        if (v < static_cast<int>(t.kappa.size())) {
            c.kappa[p] = t.kappa[v];
            std::sort(c.kappa[p].begin(), c.kappa[p].end());
        }
        for (int l : c.graph.halves[p])
            if (t.psi_at(l)) c.psi[l] = t.psi_at(l);
    }
    int next = base + 1;
    for (auto& [e, sw] : r.edge_order) {
        auto [a, b] = g.edges[e];
        if (sw) std::swap(a, b);
        int la = next++, lb = next++;
        c.graph.halves[r.new_index[g.vertex_of(a)]].push_back(la);
        c.graph.halves[r.new_index[g.vertex_of(b)]].push_back(lb);
        c.graph.edges.push_back({la, lb});
        if (t.psi_at(a)) c.psi[la] = t.psi_at(a);
        if (t.psi_at(b)) c.psi[lb] = t.psi_at(b);
    }
    c.graph.normalize();
    return out;
}

// ---- DecoratedClass

DecoratedClass::DecoratedClass(int g, std::vector<int> legs) : g_(g), legs_(std::move(legs)) {
    std::sort(legs_.begin(), legs_.end());
}

DecoratedClass DecoratedClass::fundamental(int g, std::vector<int> legs) {
    DecoratedClass c(g, legs);
    DecoratedTerm t;
    t.graph = StableGraph::smooth(g, c.legs_);
    t.kappa = {{}};
    c.add(1, t);
    return c;
}

DecoratedClass DecoratedClass::from_term(int g, std::vector<int> legs, const DecoratedTerm& t, const Rational& coeff) {
    DecoratedClass c(g, std::move(legs));
    c.add(coeff, t);
    return c;
}

int DecoratedClass::degree() const {
    int d = -1;
    for (auto& [k, e] : terms_) {
        int td = e.term.degree();
        if (d == -1) d = td;
        else if (d != td) return -2;
    }
    return d;
}

DecoratedClass DecoratedClass::degree_part(int d) const {
    DecoratedClass out(g_, legs_);
    for (auto& [k, e] : terms_)
        if (e.term.degree() == d) out.terms_.emplace(k, e);
    return out;
}

void DecoratedClass::add(const Rational& c, const DecoratedTerm& t) {
    if (c.is_zero()) return;
    CanonicalTerm ct = canonical_term(t);
    auto it = terms_.find(ct.key);
    if (it == terms_.end()) {
        terms_.emplace(ct.key, Entry{c, std::move(ct.term)});
        return;
    }
    it->second.coeff += c;
    if (it->second.coeff.is_zero()) terms_.erase(it);
}

DecoratedClass& DecoratedClass::operator+=(const DecoratedClass& o) {
    if (terms_.empty() && legs_.empty() && g_ == 0) g_ = o.g_, legs_ = o.legs_;
    for (auto& [k, e] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) terms_.emplace(k, e);
        else {
            it->second.coeff += e.coeff;
            if (it->second.coeff.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

DecoratedClass& DecoratedClass::operator-=(const DecoratedClass& o) {
    DecoratedClass neg = o;
    neg *= Rational(-1);
    return *this += neg;
}

DecoratedClass& DecoratedClass::operator*=(const Rational& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, e] : terms_) e.coeff *= s;
    return *this;
}

DecoratedClass DecoratedClass::relabel(const std::map<int, int>& leg_map) const {
    std::vector<int> nl;
    for (int l : legs_) nl.push_back(leg_map.count(l) ? leg_map.at(l) : l);
    DecoratedClass out(g_, nl);
    int big = 0;
    for (int l : nl) big = std::max(big, l);
    for (int l : legs_) big = std::max(big, l);
    for (auto& [k, e] : terms_) {
        const StableGraph& g = e.term.graph;
        std::map<int, int> m;
        int next = std::max(big, g.max_label()) + 1;
        for (auto& [a, b] : g.edges) m[a] = next++, m[b] = next++;
        for (int l : g.legs()) m[l] = leg_map.count(l) ? leg_map.at(l) : l;
        DecoratedTerm t;
        t.graph.genera = g.genera;
        for (auto& hs : g.halves) {
            std::vector<int> nh;
            for (int h : hs) nh.push_back(m.at(h));
            t.graph.halves.push_back(nh);
        }
        for (auto& [a, b] : g.edges) t.graph.edges.push_back({m.at(a), m.at(b)});
        for (auto& [l, x] : e.term.psi) t.psi[m.at(l)] = x;
        t.kappa = e.term.kappa;
        t.graph.normalize();
        out.add(e.coeff, t);
    }
    return out;
}

// ---- multiplication

DecoratedClass mul_psi(const DecoratedClass& c, int leg, int exponent) {
    DecoratedClass out(c.g(), c.legs());
    for (auto& [k, e] : c.terms()) {
        DecoratedTerm t = e.term;
        t.psi[leg] += exponent;
        out.add(e.coeff, t);
    }
    return out;
}

DecoratedClass mul_kappa(const DecoratedClass& c, int a) {
    DecoratedClass out(c.g(), c.legs());
    for (auto& [k, e] : c.terms())
        for (int v = 0; v < e.term.graph.num_vertices(); ++v) {
            DecoratedTerm t = e.term;
            t.kappa.resize(t.graph.num_vertices());
            t.kappa[v].push_back(a);
            out.add(e.coeff, t);
        }
    return out;
}

DecoratedClass mul_psi_kappa(const DecoratedClass& c, const PsiKappaMonomial& m) {
    DecoratedClass out = c;
    for (auto& [l, x] : m.psi) out = mul_psi(out, l, x);
    for (int a : m.kappa) out = mul_kappa(out, a);
    return out;
}

DecoratedClass mul_boundary_divisor(const DecoratedClass& c, const StableGraph& gp) {
    std::string target = canonical_form(gp);
    DecoratedClass out(c.g(), c.legs());
    for (auto& [k, e] : c.terms()) {
        const DecoratedTerm& t = e.term;
        const StableGraph& g = t.graph;
        for (int v = 0; v < g.num_vertices(); ++v) {
            for (auto& d : vertex_degenerations(g, v)) {
                if (canonical_form(contract_edges(d.graph, {d.new_edge})) != target) continue;
                Rational coeff = e.coeff / Rational(d.aut);
                std::vector<int> ks = v < static_cast<int>(t.kappa.size()) ? t.kappa[v] : std::vector<int>{};
                bool split = d.graph.num_vertices() > g.num_vertices();
                unsigned masks = split ? (1u << ks.size()) : 1u;
                for (unsigned mask = 0; mask < masks; ++mask) {
                    DecoratedTerm nt;
                    nt.graph = d.graph;
                    nt.psi = t.psi;
                    nt.kappa = t.kappa;
                    nt.kappa.resize(d.graph.num_vertices());
                    if (split) {
                        std::vector<int> a, b;
                        for (std::size_t i = 0; i < ks.size(); ++i) ((mask >> i) & 1u ? b : a).push_back(ks[i]);
                        nt.kappa[v] = a;
                        nt.kappa.back() = b;
                    }
                    out.add(coeff, nt);
                }
            }
        }
        for (int ei = 0; ei < g.num_edges(); ++ei) {
            if (canonical_form(contract_edges(g, {ei})) != target) continue;
            for (int side = 0; side < 2; ++side) {
                DecoratedTerm nt = t;
                int h = side ? g.edges[ei].second : g.edges[ei].first;
                nt.psi[h] += 1;
                out.add(-e.coeff, nt);
            }
        }
    }
    return out;
}

// ---- pushforward

DecoratedTerm graft(const StableGraph& gamma, const std::vector<DecoratedTerm>& pieces) {
    if (static_cast<int>(pieces.size()) != gamma.num_vertices()) throw std::invalid_argument("graft: factor count mismatch");
    DecoratedTerm out;
    int next = gamma.max_label() + 1;
    for (int w = 0; w < gamma.num_vertices(); ++w) {
        const DecoratedTerm& p = pieces[w];
        auto pl = p.graph.legs();
        auto want = gamma.halves[w];
        std::sort(want.begin(), want.end());
        if (pl != want) throw std::invalid_argument("marking mismatch in clutch pushforward");
        std::map<int, int> m;
        for (int l : pl) m[l] = l;
        for (auto& [a, b] : p.graph.edges) m[a] = next++, m[b] = next++;
        for (int v = 0; v < p.graph.num_vertices(); ++v) {
            out.graph.genera.push_back(p.graph.genera[v]);
            std::vector<int> hs;
            for (int h : p.graph.halves[v]) hs.push_back(m.at(h));
            out.graph.halves.push_back(hs);
            out.kappa.push_back(v < static_cast<int>(p.kappa.size()) ? p.kappa[v] : std::vector<int>{});
        }
        for (auto& [a, b] : p.graph.edges) out.graph.edges.push_back({m.at(a), m.at(b)});
        for (auto& [l, x] : p.psi)
            if (x) out.psi[m.at(l)] += x;
    }
    for (auto& e : gamma.edges) out.graph.edges.push_back(e);
    out.graph.normalize();
    return out;
}

DecoratedClass clutch_pushforward(const std::vector<DecoratedClass>& factors, const StableGraph& gamma) {
    if (static_cast<int>(factors.size()) != gamma.num_vertices()) throw std::invalid_argument("clutch_pushforward: factor count mismatch");
    for (int w = 0; w < gamma.num_vertices(); ++w) {
        auto want = gamma.halves[w];
        std::sort(want.begin(), want.end());
        if (factors[w].legs() != want || factors[w].g() != gamma.genera[w])
            throw std::invalid_argument("marking mismatch in clutch pushforward");
    }
    DecoratedClass out(gamma.genus(), gamma.legs());
    std::vector<const DecoratedClass::Entry*> pick(factors.size());
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t w, Rational coeff) {
        if (w == factors.size()) {
            std::vector<DecoratedTerm> ts;
            for (auto* p : pick) ts.push_back(p->term);
            out.add(coeff, graft(gamma, ts));
            return;
        }
        for (auto& [k, e] : factors[w].terms()) {
            pick[w] = &e;
            rec(w + 1, coeff * e.coeff);
        }
    };
    rec(0, Rational(1));
    return out;
}

// ---- intersection numbers

namespace {

Rational dfact_odd(int m) {  // (2m-1)!!
    mpz_class r = 1;
    for (int i = 2 * m - 1; i > 1; i -= 2) r *= i;
    return Rational(r);
}

std::mutex memo_mutex;
std::map<std::tuple<int, std::vector<int>, std::vector<int>>, Rational> memo;

Rational psi_corr(int g, std::vector<int> d);

Rational psi_corr_raw(int g, std::vector<int> d) {
    int n = static_cast<int>(d.size());
    int sum = std::accumulate(d.begin(), d.end(), 0);
    if (sum != 3 * g - 3 + n) return Rational(0);
    for (int x : d)
        if (x < 0) return Rational(0);
    if (g == 0 && n == 3) return Rational(1);
    if (g == 1 && n == 1) return Rational(1, 24);
    if (d[0] == 0) {
        std::vector<int> rest(d.begin() + 1, d.end());
        Rational acc;
        for (std::size_t j = 0; j < rest.size(); ++j) {
            if (rest[j] == 0) continue;
            auto r2 = rest;
            --r2[j];
            acc += psi_corr(g, r2);
        }
        return acc;
    }
    if (d[0] == 1) {
        std::vector<int> rest(d.begin() + 1, d.end());
        return Rational(2 * g - 2 + n - 1) * psi_corr(g, rest);
    }
    int k = d.back() - 1;
    std::vector<int> s(d.begin(), d.end() - 1);
    Rational acc;
    for (std::size_t j = 0; j < s.size(); ++j) {
        auto s2 = s;
        s2[j] += k;
        acc += dfact_odd(k + s[j] + 1) / dfact_odd(s[j]) * psi_corr(g, s2);
    }
    Rational half(1, 2);
    for (int a = 0; a <= k - 1; ++a) {
        int b = k - 1 - a;
        Rational w = dfact_odd(a + 1) * dfact_odd(b + 1) * half;
        if (g >= 1 && 2 * (g - 1) - 2 + n + 1 > 0) {
            auto s2 = s;
            s2.push_back(a);
            s2.push_back(b);
            acc += w * psi_corr(g - 1, s2);
        }
        int m = static_cast<int>(s.size());
        for (int g1 = 0; g1 <= g; ++g1)
            for (unsigned mask = 0; mask < (1u << m); ++mask) {
                std::vector<int> i1{a}, i2{b};
                for (int j = 0; j < m; ++j) ((mask >> j) & 1u ? i1 : i2).push_back(s[j]);
                int g2 = g - g1;
                if (2 * g1 - 2 + static_cast<int>(i1.size()) <= 0) continue;
                if (2 * g2 - 2 + static_cast<int>(i2.size()) <= 0) continue;
                acc += w * psi_corr(g1, i1) * psi_corr(g2, i2);
            }
    }
    return acc / dfact_odd(k + 2);
}

Rational psi_corr(int g, std::vector<int> d) {
    std::sort(d.begin(), d.end());
    auto key = std::make_tuple(g, d, std::vector<int>{});
    {
        std::lock_guard<std::mutex> lk(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    Rational r = psi_corr_raw(g, d);
    std::lock_guard<std::mutex> lk(memo_mutex);
    memo.emplace(key, r);
    return r;
}

}  // namespace

Rational correlator(int g, std::vector<int> psi_exps, std::vector<int> kappa_exps) {
    int n = static_cast<int>(psi_exps.size());
    if (g < 0 || 2 * g - 2 + n <= 0) throw std::invalid_argument("unstable (g,n) in correlator");
    int deg = std::accumulate(psi_exps.begin(), psi_exps.end(), 0) + std::accumulate(kappa_exps.begin(), kappa_exps.end(), 0);
    if (deg != 3 * g - 3 + n) return Rational(0);
    if (kappa_exps.empty()) return psi_corr(g, psi_exps);
    std::sort(psi_exps.begin(), psi_exps.end());
    std::sort(kappa_exps.begin(), kappa_exps.end());
    auto key = std::make_tuple(g, psi_exps, kappa_exps);
    {
        std::lock_guard<std::mutex> lk(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    // κ_b = π_*(ψ_{n+1}^{b+1}); remaining κ_c pull back to κ_c − ψ_{n+1}^c.
    int b = kappa_exps[0];
    std::vector<int> rest(kappa_exps.begin() + 1, kappa_exps.end());
    Rational acc;
    int m = static_cast<int>(rest.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        int extra = b + 1;
        std::vector<int> kk;
        int sign = 1;
        for (int j = 0; j < m; ++j) {
            if ((mask >> j) & 1u) extra += rest[j], sign = -sign;
            else kk.push_back(rest[j]);
        }
        auto ps = psi_exps;
        ps.push_back(extra);
        acc += Rational(sign) * correlator(g, ps, kk);
    }
    std::lock_guard<std::mutex> lk(memo_mutex);
    memo.emplace(key, acc);
    return acc;
}

Rational integrate_term(const DecoratedTerm& t) {
    Rational acc(1);
    for (int v = 0; v < t.graph.num_vertices(); ++v) {
        std::vector<int> ps;
        for (int h : t.graph.halves[v]) ps.push_back(t.psi_at(h));
        std::vector<int> ks = v < static_cast<int>(t.kappa.size()) ? t.kappa[v] : std::vector<int>{};
        acc *= correlator(t.graph.genera[v], ps, ks);
        if (acc.is_zero()) break;
    }
    return acc;
}

Rational integrate_class(const DecoratedClass& c, bool* degree_mismatch) {
    Rational acc;
    bool mismatch = false;
    for (auto& [k, e] : c.terms()) {
        if (e.term.degree() != c.dim()) {
            mismatch = true;
            continue;
        }
        acc += e.coeff * integrate_term(e.term);
    }
    if (degree_mismatch) *degree_mismatch = mismatch;
    return acc;
}

// ---- chains

std::string Generator::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Psi: os << "psi" << index; break;
        case Kind::Kappa: os << "kappa" << index; break;
        case Kind::Delta: os << "delta{" << describe(divisor) << "}"; break;
    }
    return os.str();
}

std::string chain_name(const Chain& ch) {
    if (ch.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < ch.size(); ++i) s += (i ? "*" : "") + ch[i].name();
    return s;
}

std::vector<Generator> generators(int g, const std::vector<int>& legs, int max_kappa) {
    std::vector<Generator> out;
    for (int a = 1; a <= max_kappa; ++a) out.push_back({Generator::Kind::Kappa, a, {}});
    for (int l : legs) out.push_back({Generator::Kind::Psi, l, {}});
    for (auto& d : enumerate_one_edge_graphs(g, legs)) out.push_back({Generator::Kind::Delta, 0, d});
    return out;
}

std::vector<Chain> chains_of_degree(int g, const std::vector<int>& legs, int d, int max_delta) {
    std::vector<Chain> out;
    if (d < 0) return out;
    if (d == 0) return {Chain{}};
    auto gens = generators(g, legs, d);
    Chain cur;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int left, int deltas) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < gens.size(); ++i) {
            int gd = gens[i].degree();
            if (gd > left) continue;
            bool isd = gens[i].kind == Generator::Kind::Delta;
            if (isd && deltas >= max_delta) continue;
            cur.push_back(gens[i]);
            rec(i, left - gd, deltas + (isd ? 1 : 0));
            cur.pop_back();
        }
    };
    rec(0, d, 0);
    return out;
}

DecoratedClass apply_chain(const DecoratedClass& c, const Chain& ch) {
    DecoratedClass out = c;
    for (auto& gen : ch) {
        if (out.is_zero()) break;
        switch (gen.kind) {
            case Generator::Kind::Psi: out = mul_psi(out, gen.index); break;
            case Generator::Kind::Kappa: out = mul_kappa(out, gen.index); break;
            case Generator::Kind::Delta: out = mul_boundary_divisor(out, gen.divisor); break;
        }
    }
    return out;
}

std::vector<ProductProbe> product_probes(const StableGraph& gamma, int degree, int max_delta) {
    int nv = gamma.num_vertices();
    std::vector<int> dims(nv);
    for (int w = 0; w < nv; ++w) dims[w] = 3 * gamma.genera[w] - 3 + gamma.valence(w);
    std::vector<ProductProbe> out;
    std::vector<int> ds(nv);
    std::function<void(int, int)> comp = [&](int w, int left) {
        if (w == nv) {
            if (left != 0) return;
            std::vector<std::vector<Chain>> per(nv);
            for (int u = 0; u < nv; ++u) per[u] = chains_of_degree(gamma.genera[u], gamma.halves[u], ds[u], max_delta);
            ProductProbe cur(nv);
            std::function<void(int)> prod = [&](int u) {
                if (u == nv) {
                    out.push_back(cur);
                    return;
                }
                for (auto& ch : per[u]) {
                    cur[u] = ch;
                    prod(u + 1);
                }
            };
            prod(0);
            return;
        }
        for (int d = 0; d <= std::min(left, dims[w]); ++d) {
            ds[w] = d;
            comp(w + 1, left - d);
        }
    };
    comp(0, degree);
    return out;
}

Rational pair_product(const ProductClass& pc, const ProductProbe& p) {
    Rational acc;
    for (auto& e : pc.entries) {
        Rational term = e.coeff;
        for (std::size_t w = 0; w < e.factors.size() && !term.is_zero(); ++w)
            term *= integrate_class(apply_chain(e.factors[w], p[w]));
        acc += term;
    }
    return acc;
}

DecoratedClass pushforward_probe(const StableGraph& gamma, const ProductProbe& p) {
    std::vector<DecoratedClass> fs;
    for (int w = 0; w < gamma.num_vertices(); ++w)
        fs.push_back(apply_chain(DecoratedClass::fundamental(gamma.genera[w], gamma.halves[w]), p[w]));
    return clutch_pushforward(fs, gamma);
}

Rational pair_pullback(const Chain& x, const DecoratedClass& pushed) {
    return integrate_class(apply_chain(pushed, x));
}

std::vector<Rational> fingerprint(const DecoratedClass& c, const std::vector<Chain>& probes) {
    std::vector<Rational> out;
    for (auto& p : probes) out.push_back(integrate_class(apply_chain(c, p)));
    return out;
}

SpanResult express_in_span(const DecoratedClass& target, const std::vector<DecoratedClass>& candidates,
                           const std::vector<Chain>& probes) {
    RatMatrix a(probes.size(), candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        auto f = fingerprint(candidates[j], probes);
        for (std::size_t i = 0; i < probes.size(); ++i) a.at(i, j) = f[i];
    }
    auto b = fingerprint(target, probes);
    auto s = solve_rational_system(a, b);
    SpanResult r;
    r.coefficients = s.solution;
    r.kernel = s.kernel;
    switch (s.status) {
        case SolveResult::Status::Unique: r.status = SpanResult::Status::Unique; break;
        case SolveResult::Status::NonUnique: r.status = SpanResult::Status::NonUnique; break;
        case SolveResult::Status::NoSolution: r.status = SpanResult::Status::Inconsistent; break;
    }
    return r;
}

}  // namespace spinstrata
