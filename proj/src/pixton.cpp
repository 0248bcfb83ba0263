#include "spinstrata/pixton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

RamificationVector RamificationVector::from_signature(int g, const std::vector<int>& mu, int k) {
    RamificationVector r;
    r.g = g;
    r.k = k;
    for (int m : mu) r.a.push_back(m + k);
    return r;
}

bool RamificationVector::consistent() const {
    long s = std::accumulate(a.begin(), a.end(), 0L);
    return s == static_cast<long>(k) * (2 * g - 2 + static_cast<long>(a.size()));
}

bool RamificationVector::all_odd() const {
    return std::all_of(a.begin(), a.end(), [](int x) { return x % 2 != 0; });
}

namespace {

long mod(long x, long r) { return ((x % r) + r) % r; }

std::vector<int> leg_labels(const RamificationVector& a) {
    std::vector<int> legs(a.a.size());
    std::iota(legs.begin(), legs.end(), 1);
    return legs;
}

}  // namespace

std::vector<Weighting> admissible_weightings(const StableGraph& gamma, const RamificationVector& a, long r,
                                             bool odd_only) {
    if (r < 1) throw std::invalid_argument("r must be positive");
    std::vector<Weighting> out;
    int V = gamma.num_vertices(), E = gamma.num_edges();
    // spanning tree by BFS from vertex 0
    std::vector<int> parent_edge(V, -1), order;
    std::vector<bool> seen(V, false), in_tree(E, false);
    std::deque<int> q{0};
    seen[0] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        order.push_back(v);
        for (int e = 0; e < E; ++e) {
            int u1 = gamma.vertex_of(gamma.edges[e].first), u2 = gamma.vertex_of(gamma.edges[e].second);
            int u = u1 == v ? u2 : (u2 == v ? u1 : -1);
            if (u < 0 || seen[u]) continue;
            seen[u] = true;
            in_tree[e] = true;
            parent_edge[u] = e;
            q.push_back(u);
        }
    }
    std::vector<int> free_edges;
    for (int e = 0; e < E; ++e)
        if (!in_tree[e]) free_edges.push_back(e);
    Weighting base;
    for (int l : gamma.legs()) {
        if (l < 1 || l > static_cast<int>(a.a.size())) return out;
        base[l] = mod(a.a[l - 1], r);
    }
    std::vector<long> choice(free_edges.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == free_edges.size()) {
            Weighting w = base;
            for (std::size_t j = 0; j < free_edges.size(); ++j) {
                auto [h, hp] = gamma.edges[free_edges[j]];
                w[h] = choice[j];
                w[hp] = mod(-choice[j], r);
            }
            // leaves first
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                int v = *it;
                long target = static_cast<long>(a.k) * (2 * gamma.genera[v] - 2 + gamma.valence(v));
                if (parent_edge[v] < 0) {
                    long s = 0;
                    for (int h : gamma.halves[v]) s += w.at(h);
                    if (mod(s - target, r) != 0) return;
                    continue;
                }
                auto [h1, h2] = gamma.edges[parent_edge[v]];
                int mine = gamma.vertex_of(h1) == v ? h1 : h2;
                int theirs = mine == h1 ? h2 : h1;
                long s = 0;
                for (int h : gamma.halves[v])
                    if (h != mine) s += w.at(h);
                w[mine] = mod(target - s, r);
                w[theirs] = mod(-w[mine], r);
            }
            if (odd_only)
                for (auto [h, hp] : gamma.edges)
                    if (w[h] % 2 == 0 || w[hp] % 2 == 0) return;
            out.push_back(std::move(w));
            return;
        }
        for (long x = 0; x < r; ++x) {
            choice[i] = x;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

namespace {

// Exact-degree part of Cont (no 1/|Aut|), added to out with the given scale.
void add_contribution(DecoratedClass& out, const RamificationVector& a, const StableGraph& gamma, const Weighting& w,
                      int degree, const Rational& scale) {
    int V = gamma.num_vertices();
    auto legs = gamma.legs();
    int E = gamma.num_edges();
    if (E > degree) return;
    DecoratedTerm t;
    t.graph = gamma;
    t.kappa.assign(V, {});
    std::vector<Rational> edge_w(E);
    for (int e = 0; e < E; ++e) edge_w[e] = Rational(w.at(gamma.edges[e].first)) * Rational(w.at(gamma.edges[e].second));
    // slot order: vertices (κ₁ powers), legs (ψ powers), edges (series index m, then split)
    std::function<void(int, int, Rational)> edges_rec;
    std::function<void(std::size_t, int, Rational)> legs_rec;
    std::function<void(int, int, Rational)> verts_rec;
    edges_rec = [&](int e, int left, Rational c) {
        if (e == E) {
            if (left == 0) out.add(scale * c, t);
            return;
        }
        auto [h, hp] = gamma.edges[e];
        for (int m = 1; m <= left - (E - e - 1); ++m) {
            Rational cm = pow(edge_w[e], m) / factorial(m);
            if (m % 2 == 0) cm = -cm;
            for (int j = 0; j <= m - 1; ++j) {
                Rational cj = cm * binomial(m - 1, j);
                if (j) t.psi[h] = j;
                if (m - 1 - j) t.psi[hp] = m - 1 - j;
                edges_rec(e + 1, left - m, c * cj);
                t.psi.erase(h);
                t.psi.erase(hp);
            }
        }
    };
    legs_rec = [&](std::size_t i, int left, Rational c) {
        if (i == legs.size()) {
            edges_rec(0, left, c);
            return;
        }
        int l = legs[i];
        Rational a2(static_cast<long>(a.a[l - 1]) * a.a[l - 1]);
        for (int p = 0; p <= left - E; ++p) {
            if (p) t.psi[l] = p;
            legs_rec(i + 1, left - p, c * pow(a2, p) / factorial(p));
            t.psi.erase(l);
        }
    };
    verts_rec = [&](int v, int left, Rational c) {
        if (v == V) {
            legs_rec(0, left, c);
            return;
        }
        for (int m = 0; m <= left - E; ++m) {
            t.kappa[v].assign(m, 1);
            verts_rec(v + 1, left - m, c * pow(Rational(-a.k), m) / factorial(m));
        }
        t.kappa[v].clear();
    };
    verts_rec(0, degree, Rational(1));
}

}  // namespace

DecoratedClass contribution_class(const RamificationVector& a, const StableGraph& gamma, const Weighting& w,
                                  int max_degree) {
    DecoratedClass out(a.g, leg_labels(a));
    for (int d = 0; d <= max_degree; ++d) add_contribution(out, a, gamma, w, d, Rational(1));
    return out;
}

DecoratedClass pixton_P(const RamificationVector& a, long r, int degree, bool spin) {
    if (!a.consistent()) throw std::invalid_argument("ramification vector must sum to k(2g-2+n)");
    if (spin && (!a.all_odd() || r % 2 != 0)) throw std::invalid_argument("spin variant needs odd entries and even r");
    auto legs = leg_labels(a);
    DecoratedClass out(a.g, legs);
    for (auto& gamma : enumerate_stable_graphs(a.g, legs, degree)) {
        long aut = automorphism_order(gamma);
        int h1 = gamma.h1();
        Rational pref = Rational(1) / (Rational(aut) * pow(Rational(r), h1));
        if (spin) pref /= pow(Rational(2), a.g - h1);
        for (auto& w : admissible_weightings(gamma, a, r, spin)) add_contribution(out, a, gamma, w, degree, pref);
    }
    return out;
}

DecoratedClass RPolyClass::at(const Rational& r) const {
    DecoratedClass out(g, legs);
    for (auto& [key, tp] : terms) out.add(tp.second(r), tp.first);
    return out;
}

long pixton_base_sample(const RamificationVector& a) {
    long s = 0;
    for (int x : a.a) s += std::abs(x);
    return 2 * (s + static_cast<long>(a.k) * (2 * a.g - 2 + static_cast<long>(a.a.size()))) + 2;
}

RPolyClass pixton_P_poly(const RamificationVector& a, int degree, bool spin, int sample_set) {
    RPolyClass out;
    out.g = a.g;
    out.legs = leg_labels(a);
    long r0 = pixton_base_sample(a);
    int npts = 2 * degree + 2;
    long start = r0 + 2L * sample_set * (npts + 2);
    std::vector<DecoratedClass> vals;
    std::map<std::string, DecoratedTerm> keys;
    for (int j = 0; j < npts + 2; ++j) {
        long r = start + 2L * j;
        (j < npts ? out.samples : out.checks).push_back(r);
        vals.push_back(pixton_P(a, r, degree, spin));
        for (auto& [k, e] : vals.back().terms()) keys.emplace(k, e.term);
        std::ostringstream os;
        os << "r=" << r << " terms=" << vals.back().terms().size() << (j < npts ? "" : " (check)");
        out.log.push_back(os.str());
    }
    auto coeff = [](const DecoratedClass& c, const std::string& k) {
        auto it = c.terms().find(k);
        return it == c.terms().end() ? Rational(0) : it->second.coeff;
    };
    for (auto& [k, term] : keys) {
        std::vector<std::pair<Rational, Rational>> pts;
        for (int j = 0; j < npts; ++j) pts.push_back({Rational(out.samples[j]), coeff(vals[j], k)});
        UniPoly p = lagrange_interpolate(pts);
        bool ok = p.degree() <= 2 * degree;
        for (int j = 0; j < 2 && ok; ++j) ok = p(Rational(out.checks[j])) == coeff(vals[npts + j], k);
        if (!ok) {
            std::ostringstream os;
            os << "r not in polynomial range (term " << k << ", fitted degree " << p.degree() << ")";
            for (auto& l : out.log) os << "\n  " << l;
            throw std::runtime_error(os.str());
        }
        if (!p.is_zero()) out.terms[k] = {term, p};
    }
    std::ostringstream os;
    os << "interpolated " << out.terms.size() << " terms from " << npts << " samples, " << out.checks.size()
       << " checks passed";
    out.log.push_back(os.str());
    return out;
}

namespace {

DecoratedClass dr_impl(const RamificationVector& a, bool spin, std::vector<std::string>* log) {
    if (!a.consistent()) throw std::invalid_argument("ramification vector must sum to k(2g-2+n)");
    if (a.g == 0) {
        if (log) log->push_back("g=0: fundamental class");
        return DecoratedClass::fundamental(0, leg_labels(a));
    }
    auto p = pixton_P_poly(a, a.g, spin);
    if (log) log->insert(log->end(), p.log.begin(), p.log.end());
    auto c = p.at(Rational(0));
    c *= Rational(1) / pow(Rational(2), a.g);
    return c;
}

}  // namespace

DecoratedClass dr_cycle(const RamificationVector& a, std::vector<std::string>* log) { return dr_impl(a, false, log); }

DecoratedClass spin_dr_cycle(const RamificationVector& a, std::vector<std::string>* log) {
    if (!a.all_odd()) throw std::invalid_argument("spin DR needs every entry of a odd");
    if (a.k % 2 == 0) throw std::invalid_argument("spin DR needs odd k");
    return dr_impl(a, true, log);
}

}  // namespace spinstrata
