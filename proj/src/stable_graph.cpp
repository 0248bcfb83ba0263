#include "spinstrata/stable_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

StableGraph StableGraph::smooth(int g, std::vector<int> legs) {
    StableGraph s;
    std::sort(legs.begin(), legs.end());
    s.genera = {g};
    s.halves = {legs};
    return s;
}

std::vector<int> StableGraph::legs() const {
    std::set<int> used;
    for (auto& [a, b] : edges) used.insert(a), used.insert(b);
    std::vector<int> out;
    for (auto& hs : halves)
        for (int h : hs)
            if (!used.count(h)) out.push_back(h);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> StableGraph::legs_at(int v) const {
    std::vector<int> out;
    for (int h : halves[v])
        if (is_leg(h)) out.push_back(h);
    return out;
}

int StableGraph::vertex_of(int label) const {
    for (int v = 0; v < num_vertices(); ++v)
        for (int h : halves[v])
            if (h == label) return v;
    return -1;
}

int StableGraph::genus() const {
    return std::accumulate(genera.begin(), genera.end(), 0) + h1();
}

int StableGraph::max_label() const {
    int m = 0;
    for (auto& hs : halves)
        for (int h : hs) m = std::max(m, h);
    return m;
}

int StableGraph::partner(int label) const {
    for (auto& [a, b] : edges) {
        if (a == label) return b;
        if (b == label) return a;
    }
    return -1;
}

bool StableGraph::connected() const {
    int n = num_vertices();
    if (n == 0) return false;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& [a, b] : edges) parent[find(vertex_of(a))] = find(vertex_of(b));
    for (int v = 1; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

void StableGraph::normalize() {
    for (auto& hs : halves) std::sort(hs.begin(), hs.end());
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
}

std::vector<GraphViolation> validate_stable_graph(const StableGraph& g, int genus, const std::vector<int>& legs) {
    std::vector<GraphViolation> out;
    if (g.genera.size() != g.halves.size()) out.push_back({"vertex data mismatch", -1});
    std::map<int, int> seen;
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int h : g.halves[v]) ++seen[h];
    for (auto& [h, c] : seen)
        if (c > 1) out.push_back({"duplicate half-edge", h});
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [a, b] = g.edges[e];
        if (a == b || !seen.count(a) || !seen.count(b)) out.push_back({"bad edge", e});
    }
    if (!out.empty()) return out;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.genera[v] < 0) out.push_back({"negative genus", v});
        if (2 * g.genera[v] - 2 + g.valence(v) <= 0) out.push_back({"unstable vertex", v});
    }
    if (!g.connected()) out.push_back({"disconnected", -1});
    if (g.genus() != genus) out.push_back({"genus mismatch", g.genus()});
    auto l = g.legs();
    auto want = legs;
    std::sort(want.begin(), want.end());
    if (l != want) out.push_back({"leg mismatch", -1});
    return out;
}

// ---- canonical labelling

namespace {

using Key = std::vector<long>;

std::vector<long> edge_tuple(int pu, const Key& au, int pv, const Key& av) {
    std::vector<long> t;
    t.push_back(pu);
    t.push_back(static_cast<long>(au.size()));
    t.insert(t.end(), au.begin(), au.end());
    t.push_back(pv);
    t.push_back(static_cast<long>(av.size()));
    t.insert(t.end(), av.begin(), av.end());
    return t;
}

}  // namespace

CanonResult canonicalize(const CanonInput& in) {
    int n = static_cast<int>(in.vkey.size());
    // colour refinement
    std::vector<int> color(n);
    {
        std::vector<Key> keys = in.vkey;
        std::vector<Key> uniq = keys;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int v = 0; v < n; ++v) color[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), keys[v]) - uniq.begin());
    }
    for (;;) {
        std::vector<std::vector<long>> sig(n);
        std::vector<std::vector<std::vector<long>>> nb(n);
        for (auto& e : in.edges) {
            nb[e.u].push_back(edge_tuple(color[e.v], e.au, 0, e.av));
            nb[e.v].push_back(edge_tuple(color[e.u], e.av, 0, e.au));
        }
        for (int v = 0; v < n; ++v) {
            std::sort(nb[v].begin(), nb[v].end());
            sig[v].push_back(color[v]);
            for (auto& t : nb[v]) {
                sig[v].push_back(-1);
                sig[v].insert(sig[v].end(), t.begin(), t.end());
            }
        }
        auto uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> nc(n);
        for (int v = 0; v < n; ++v) nc[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
        int before = *std::max_element(color.begin(), color.end()) + 1;
        int after = static_cast<int>(uniq.size());
        color = nc;
        if (after == before) break;
    }
    // classes in colour order
    int ncol = n ? *std::max_element(color.begin(), color.end()) + 1 : 0;
    std::vector<std::vector<int>> classes(ncol);
    for (int v = 0; v < n; ++v) classes[color[v]].push_back(v);

    std::vector<long> vpart;
    vpart.push_back(n);
    for (int c = 0; c < ncol; ++c)
        for (int v : classes[c]) {
            vpart.push_back(static_cast<long>(in.vkey[v].size()));
            vpart.insert(vpart.end(), in.vkey[v].begin(), in.vkey[v].end());
        }

    CanonResult best;
    bool have = false;
    long count = 0;
    std::vector<int> order;  // position -> vertex
    std::vector<int> pos(n);

    std::function<void(int)> rec = [&](int c) {
        if (c == ncol) {
            for (int p = 0; p < n; ++p) pos[order[p]] = p;
            std::vector<std::pair<std::vector<long>, std::pair<int, bool>>> tuples;
            for (int e = 0; e < static_cast<int>(in.edges.size()); ++e) {
                auto& ed = in.edges[e];
                auto t1 = edge_tuple(pos[ed.u], ed.au, pos[ed.v], ed.av);
                auto t2 = edge_tuple(pos[ed.v], ed.av, pos[ed.u], ed.au);
                if (t2 < t1) tuples.push_back({t2, {e, true}});
                else tuples.push_back({t1, {e, false}});
            }
            std::sort(tuples.begin(), tuples.end());
            std::vector<long> enc = vpart;
            enc.push_back(static_cast<long>(tuples.size()));
            for (auto& t : tuples) enc.insert(enc.end(), t.first.begin(), t.first.end());
            if (!have || enc < best.encoding) {
                have = true;
                count = 1;
                best.encoding = enc;
                best.vertex_order = order;
                best.new_index = pos;
                best.edge_order.clear();
                for (auto& t : tuples) best.edge_order.push_back(t.second);
            } else if (enc == best.encoding) {
                ++count;
            }
            return;
        }
        std::vector<int> cls = classes[c];
        std::sort(cls.begin(), cls.end());
        do {
            order.insert(order.end(), cls.begin(), cls.end());
            rec(c + 1);
            order.resize(order.size() - cls.size());
        } while (std::next_permutation(cls.begin(), cls.end()));
    };
    rec(0);
    if (!have) {
        best.encoding = vpart;
        best.encoding.push_back(0);
    }
    // multi-edge and loop symmetries
    long aut = count;
    std::map<std::vector<long>, long> mult;
    for (auto& [e, sw] : best.edge_order) {
        auto& ed = in.edges[e];
        int pu = best.new_index[ed.u], pv = best.new_index[ed.v];
        auto t = sw ? edge_tuple(pv, ed.av, pu, ed.au) : edge_tuple(pu, ed.au, pv, ed.av);
        ++mult[t];
        if (ed.u == ed.v && ed.au == ed.av) aut *= 2;
    }
    for (auto& [t, m] : mult)
        for (long i = 2; i <= m; ++i) aut *= i;
    best.automorphisms = aut;
    return best;
}

std::string encoding_string(const std::vector<long>& enc) {
    std::ostringstream os;
    for (std::size_t i = 0; i < enc.size(); ++i) {
        if (i) os << '.';
        os << enc[i];
    }
    return os.str();
}

CanonInput canon_input(const StableGraph& g) {
    CanonInput in;
    for (int v = 0; v < g.num_vertices(); ++v) {
        Key k{g.genera[v]};
        auto legs = g.legs_at(v);
        k.push_back(static_cast<long>(legs.size()));
        k.insert(k.end(), legs.begin(), legs.end());
        k.push_back(g.valence(v));
        in.vkey.push_back(k);
    }
    for (auto& [a, b] : g.edges) in.edges.push_back({g.vertex_of(a), {}, g.vertex_of(b), {}});
    return in;
}

StableGraph canonical_graph(const StableGraph& g, CanonResult* info) {
    CanonResult r = canonicalize(canon_input(g));
    int base = 0;
    for (int l : g.legs()) base = std::max(base, l);
    StableGraph out;
    out.genera.resize(g.num_vertices());
    out.halves.resize(g.num_vertices());
    for (int p = 0; p < g.num_vertices(); ++p) {
        int v = r.vertex_order[p];
        out.genera[p] = g.genera[v];
        out.halves[p] = g.legs_at(v);
    }
    int next = base + 1;
    for (auto& [e, sw] : r.edge_order) {
        auto [a, b] = g.edges[e];
        if (sw) std::swap(a, b);
        int va = r.new_index[g.vertex_of(a)], vb = r.new_index[g.vertex_of(b)];
        int la = next++, lb = next++;
        out.halves[va].push_back(la);
        out.halves[vb].push_back(lb);
        out.edges.push_back({la, lb});
    }
    out.normalize();
    if (info) *info = r;
    return out;
}

std::string canonical_form(const StableGraph& g) {
    return encoding_string(canonicalize(canon_input(g)).encoding);
}

bool isomorphic(const StableGraph& a, const StableGraph& b) { return canonical_form(a) == canonical_form(b); }

long automorphism_order(const StableGraph& g) { return canonicalize(canon_input(g)).automorphisms; }

// ---- enumeration

std::vector<Degeneration> vertex_degenerations(const StableGraph& g, int v) {
    std::vector<Degeneration> out;
    int gv = g.genera[v];
    const auto& H = g.halves[v];
    int a = g.max_label() + 1, b = a + 1;
    auto base = [&]() {
        Degeneration d;
        d.graph = g;
        d.vertex = v;
        d.origin.resize(g.num_vertices());
        std::iota(d.origin.begin(), d.origin.end(), 0);
        return d;
    };
    int nh = static_cast<int>(H.size());
    if (gv >= 1 && 2 * (gv - 1) - 2 + nh + 2 > 0) {
        Degeneration d = base();
        d.graph.genera[v] = gv - 1;
        d.graph.halves[v].push_back(a);
        d.graph.halves[v].push_back(b);
        d.graph.edges.push_back({a, b});
        d.new_edge = d.graph.num_edges() - 1;
        d.aut = 2;
        d.graph.normalize();
        out.push_back(std::move(d));
    }
    for (int g1 = 0; g1 <= gv; ++g1) {
        int g2 = gv - g1;
        for (unsigned mask = 0; mask < (1u << nh); ++mask) {
            if (nh > 0 && !(mask & 1u)) continue;
            if (nh == 0 && g1 > g2) continue;
            std::vector<int> s1, s2;
            for (int i = 0; i < nh; ++i) ((mask >> i) & 1u ? s1 : s2).push_back(H[i]);
            if (2 * g1 - 2 + static_cast<int>(s1.size()) + 1 <= 0) continue;
            if (2 * g2 - 2 + static_cast<int>(s2.size()) + 1 <= 0) continue;
            Degeneration d = base();
            s1.push_back(a);
            s2.push_back(b);
            d.graph.genera[v] = g1;
            d.graph.halves[v] = s1;
            d.graph.genera.push_back(g2);
            d.graph.halves.push_back(s2);
            d.graph.edges.push_back({a, b});
            d.new_edge = d.graph.num_edges() - 1;
            d.origin.push_back(v);
            d.aut = (nh == 0 && g1 == g2) ? 2 : 1;
            d.graph.normalize();
            out.push_back(std::move(d));
        }
    }
    return out;
}

namespace {

void sort_graphs(std::vector<StableGraph>& gs) {
    struct Item {
        int edges;
        std::vector<int> gens;
        std::string enc;
        StableGraph g;
    };
    std::vector<Item> items;
    for (auto& g : gs) {
        auto gens = g.genera;
        std::sort(gens.begin(), gens.end());
        items.push_back({g.num_edges(), gens, canonical_form(g), g});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        return std::tie(x.edges, x.gens, x.enc) < std::tie(y.edges, y.gens, y.enc);
    });
    gs.clear();
    for (auto& it : items) gs.push_back(it.g);
}

std::vector<int> iota_legs(int n) {
    std::vector<int> l(n);
    std::iota(l.begin(), l.end(), 1);
    return l;
}

}  // namespace

std::vector<StableGraph> enumerate_stable_graphs(int g, const std::vector<int>& legs, int max_edges) {
    if (2 * g - 2 + static_cast<int>(legs.size()) <= 0) throw std::invalid_argument("unstable (g,n)");
    std::vector<StableGraph> all;
    std::vector<StableGraph> layer{StableGraph::smooth(g, legs)};
    all.push_back(layer[0]);
    for (int e = 1; e <= max_edges; ++e) {
        std::map<std::string, StableGraph> next;
        for (auto& s : layer)
            for (int v = 0; v < s.num_vertices(); ++v)
                for (auto& d : vertex_degenerations(s, v)) {
                    CanonResult info;
                    StableGraph c = canonical_graph(d.graph, &info);
                    next.emplace(encoding_string(info.encoding), c);
                }
        layer.clear();
        for (auto& [k, s] : next) layer.push_back(s), all.push_back(s);
        if (layer.empty()) break;
    }
    sort_graphs(all);
    return all;
}

std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges) {
    return enumerate_stable_graphs(g, iota_legs(n), max_edges);
}

std::vector<StableGraph> enumerate_one_edge_graphs(int g, const std::vector<int>& legs) {
    std::vector<StableGraph> out;
    for (auto& s : enumerate_stable_graphs(g, legs, 1))
        if (s.num_edges() == 1) out.push_back(s);
    return out;
}

std::vector<StableGraph> enumerate_one_edge_graphs(int g, int n) { return enumerate_one_edge_graphs(g, iota_legs(n)); }

// ---- contractions

StableGraph contract_edges(const StableGraph& g, const std::vector<int>& keep) {
    int n = g.num_vertices();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::set<int> kept(keep.begin(), keep.end());
    std::set<int> dropped_labels;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (kept.count(e)) continue;
        auto [a, b] = g.edges[e];
        parent[find(g.vertex_of(a))] = find(g.vertex_of(b));
        dropped_labels.insert(a);
        dropped_labels.insert(b);
    }
    std::map<int, int> root_index;
    for (int v = 0; v < n; ++v)
        if (!root_index.count(find(v))) root_index[find(v)] = static_cast<int>(root_index.size());
    // root_index assigned in order of first vertex
    StableGraph out;
    out.genera.assign(root_index.size(), 0);
    out.halves.assign(root_index.size(), {});
    std::vector<int> nv(root_index.size(), 0), ne(root_index.size(), 0);
    for (int v = 0; v < n; ++v) {
        int r = root_index[find(v)];
        out.genera[r] += g.genera[v];
        ++nv[r];
        for (int h : g.halves[v])
            if (!dropped_labels.count(h)) out.halves[r].push_back(h);
    }
    for (int e = 0; e < g.num_edges(); ++e)
        if (!kept.count(e)) ++ne[root_index[find(g.vertex_of(g.edges[e].first))]];
    for (std::size_t r = 0; r < root_index.size(); ++r) out.genera[r] += ne[r] - nv[r] + 1;
    for (int e : keep) out.edges.push_back(g.edges[e]);
    out.normalize();
    return out;
}

std::vector<GraphContraction> enumerate_gamma_structures(const StableGraph& delta, const StableGraph& gamma) {
    std::vector<GraphContraction> out;
    int ge = gamma.num_edges(), de = delta.num_edges();
    if (ge > de || delta.legs() != gamma.legs() || delta.genus() != gamma.genus()) return out;
    std::vector<int> chosen(ge);
    std::vector<bool> swapped(ge);
    std::vector<bool> used(de, false);
    std::function<void(int)> rec = [&](int i) {
        if (i == ge) {
            StableGraph c = contract_edges(delta, chosen);
            // component index of each Δ vertex, in the same order contract_edges uses
            std::vector<int> comp(delta.num_vertices());
            {
                int n = delta.num_vertices();
                std::vector<int> parent(n);
                std::iota(parent.begin(), parent.end(), 0);
                std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
                std::set<int> kept(chosen.begin(), chosen.end());
                for (int e = 0; e < de; ++e) {
                    if (kept.count(e)) continue;
                    parent[find(delta.vertex_of(delta.edges[e].first))] = find(delta.vertex_of(delta.edges[e].second));
                }
                std::map<int, int> ri;
                for (int v = 0; v < n; ++v)
                    if (!ri.count(find(v))) ri[find(v)] = static_cast<int>(ri.size());
                for (int v = 0; v < n; ++v) comp[v] = ri[find(v)];
            }
            if (c.num_vertices() != gamma.num_vertices()) return;
            GraphContraction f;
            for (int l : gamma.legs()) f.half_map[l] = l;
            for (int j = 0; j < ge; ++j) {
                auto [ga, gb] = gamma.edges[j];
                auto [da, db] = delta.edges[chosen[j]];
                if (swapped[j]) std::swap(da, db);
                f.half_map[ga] = da;
                f.half_map[gb] = db;
            }
            std::vector<int> wmap(gamma.num_vertices(), -1);  // Γ vertex -> component
            std::vector<int> back(c.num_vertices(), -1);
            for (int w = 0; w < gamma.num_vertices(); ++w) {
                for (int h : gamma.halves[w]) {
                    int cv = comp[delta.vertex_of(f.half_map[h])];
                    if (wmap[w] == -1) wmap[w] = cv;
                    else if (wmap[w] != cv) return;
                }
                if (wmap[w] < 0 || back[wmap[w]] != -1) return;
                back[wmap[w]] = w;
            }
            for (int w = 0; w < gamma.num_vertices(); ++w) {
                if (c.genera[wmap[w]] != gamma.genera[w]) return;
                if (c.valence(wmap[w]) != gamma.valence(w)) return;
            }
            f.vertex_map.resize(delta.num_vertices());
            for (int v = 0; v < delta.num_vertices(); ++v) f.vertex_map[v] = back[comp[v]];
            f.edge_map = chosen;
            out.push_back(std::move(f));
            return;
        }
        for (int e = 0; e < de; ++e) {
            if (used[e]) continue;
            used[e] = true;
            chosen[i] = e;
            for (int s = 0; s < 2; ++s) {
                swapped[i] = s;
                rec(i + 1);
            }
            used[e] = false;
        }
    };
    rec(0);
    return out;
}

SubgraphPiece contraction_piece(const StableGraph& delta, const StableGraph& gamma, const GraphContraction& f, int w) {
    SubgraphPiece p;
    std::set<int> chosen(f.edge_map.begin(), f.edge_map.end());
    for (int v = 0; v < delta.num_vertices(); ++v)
        if (f.vertex_map[v] == w) p.vertices.push_back(v);
    int next = gamma.max_label() + 1;
    for (int h : gamma.halves[w]) p.label_map[f.half_map.at(h)] = h;
    std::vector<int> local(delta.num_vertices(), -1);
    for (std::size_t i = 0; i < p.vertices.size(); ++i) local[p.vertices[i]] = static_cast<int>(i);
    for (int e = 0; e < delta.num_edges(); ++e) {
        if (chosen.count(e)) continue;
        auto [a, b] = delta.edges[e];
        if (local[delta.vertex_of(a)] < 0) continue;
        p.label_map[a] = next++;
        p.label_map[b] = next++;
        p.graph.edges.push_back({p.label_map[a], p.label_map[b]});
    }
    for (int v : p.vertices) {
        p.graph.genera.push_back(delta.genera[v]);
        std::vector<int> hs;
        for (int h : delta.halves[v]) hs.push_back(p.label_map.at(h));
        p.graph.halves.push_back(hs);
    }
    p.graph.normalize();
    return p;
}

std::string describe(const StableGraph& g) {
    std::ostringstream os;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (v) os << " ";
        os << "[g" << g.genera[v] << ":";
        for (std::size_t i = 0; i < g.halves[v].size(); ++i) os << (i ? "," : "") << g.halves[v][i];
        os << "]";
    }
    for (auto& [a, b] : g.edges) os << " (" << a << "-" << b << ")";
    return os.str();
}

}  // namespace spinstrata
