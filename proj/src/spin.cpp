#include "spinstrata/spin.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace spinstrata {

Multigraph Multigraph::of(const StableGraph& g) {
    Multigraph m;
    m.num_vertices = g.num_vertices();
    for (auto [a, b] : g.edges) m.edges.push_back({g.vertex_of(a), g.vertex_of(b)});
    return m;
}

std::vector<int> Multigraph::incident(int v) const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (edges[e].first == v || edges[e].second == v) out.push_back(e);
    return out;
}

namespace {

int other_end(const Multigraph& g, int e, int v) { return g.edges[e].first == v ? g.edges[e].second : g.edges[e].first; }

struct TreeWalk {
    std::vector<int> dist;
    std::vector<int> parent_edge;
};

TreeWalk walk_tree(const Multigraph& g, const std::set<int>& tree, int root) {
    TreeWalk w;
    w.dist.assign(g.num_vertices, -1);
    w.parent_edge.assign(g.num_vertices, -1);
    std::deque<int> q{root};
    w.dist[root] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e : g.incident(v)) {
            if (!tree.count(e)) continue;
            int u = other_end(g, e, v);
            if (w.dist[u] >= 0) continue;
            w.dist[u] = w.dist[v] + 1;
            w.parent_edge[u] = e;
            q.push_back(u);
        }
    }
    return w;
}

// tree path from a to b as edge ids in walk order
std::vector<int> tree_path(const Multigraph& g, const std::set<int>& tree, int a, int b) {
    auto w = walk_tree(g, tree, b);
    if (w.dist[a] < 0) throw std::logic_error("tree does not span");
    std::vector<int> path;
    for (int v = a; v != b;) {
        int e = w.parent_edge[v];
        path.push_back(e);
        v = other_end(g, e, v);
    }
    return path;
}

std::vector<int> cycle_of(const Multigraph& g, const std::set<int>& tree, int q) {
    auto [a, b] = g.edges[q];
    std::vector<int> c{q};
    if (a == b) return c;
    auto p = tree_path(g, tree, b, a);
    c.insert(c.end(), p.begin(), p.end());
    return c;
}

}  // namespace

std::vector<int> fundamental_cycle(const Multigraph& g, const std::vector<int>& tree_edges, int q) {
    return cycle_of(g, std::set<int>(tree_edges.begin(), tree_edges.end()), q);
}

AdaptedTree build_adapted_spanning_tree(const Multigraph& g, std::optional<std::vector<int>> initial,
                                        std::optional<int> root, const std::vector<int>& excluded) {
    int V = g.num_vertices, E = static_cast<int>(g.edges.size());
    if (V == 0) throw std::invalid_argument("empty graph");
    std::set<int> skip(excluded.begin(), excluded.end());
    std::set<int> tree;
    if (initial) {
        tree.insert(initial->begin(), initial->end());
        for (int e : tree)
            if (e < 0 || e >= E || skip.count(e)) throw std::invalid_argument("bad initial tree edge");
    } else {
        std::vector<bool> seen(V, false);
        std::deque<int> q{0};
        seen[0] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int e : g.incident(v)) {
                if (skip.count(e)) continue;
                int u = other_end(g, e, v);
                if (seen[u]) continue;
                seen[u] = true;
                tree.insert(e);
                q.push_back(u);
            }
        }
    }
    if (static_cast<int>(tree.size()) != V - 1) throw std::invalid_argument("initial edges do not form a spanning tree");
    {
        auto w = walk_tree(g, tree, 0);
        for (int d : w.dist)
            if (d < 0) throw std::invalid_argument("graph is not connected");
    }
    auto tree_degree = [&](int v) {
        int d = 0;
        for (int e : g.incident(v)) d += tree.count(e) ? 1 : 0;
        return d;
    };
    AdaptedTree out;
    if (root) {
        out.root = *root;
        if (V > 1 && tree_degree(out.root) != 1) throw std::invalid_argument("initial vertex must be a leaf of the tree");
    } else {
        out.root = 0;
        for (int v = 0; v < V; ++v)
            if (V == 1 || tree_degree(v) == 1) {
                out.root = v;
                break;
            }
    }
    for (int k = 0;; ++k) {
        auto w = walk_tree(g, tree, out.root);
        std::vector<int> layer;
        for (int v = 0; v < V; ++v)
            if (w.dist[v] == k + 1) layer.push_back(v);
        if (layer.empty()) break;
        for (bool changed = true; changed;) {
            changed = false;
            w = walk_tree(g, tree, out.root);
            for (int v : layer) {
                std::set<int> away;
                for (int e : g.incident(v))
                    if (tree.count(e) && e != w.parent_edge[v]) away.insert(e);
                if (away.size() < 2) continue;
                for (int q = 0; q < E && !changed; ++q) {
                    if (tree.count(q) || skip.count(q)) continue;
                    std::vector<int> hit;
                    for (int e : cycle_of(g, tree, q))
                        if (away.count(e)) hit.push_back(e);
                    if (hit.size() < 2) continue;
                    std::sort(hit.begin(), hit.end());
                    tree.erase(hit[1]);
                    tree.insert(q);
                    ++out.replacements;
                    changed = true;
                }
                if (changed) break;
            }
        }
    }
    out.tree_edges.assign(tree.begin(), tree.end());
    for (int e = 0; e < E; ++e)
        if (!tree.count(e)) {
            out.cotree_edges.push_back(e);
            out.cycles.push_back(cycle_of(g, tree, e));
        }
    return out;
}

std::string planarity_audit(const Multigraph& g, const AdaptedTree& t) {
    // nodal point at v: 2·edge + side
    std::vector<std::set<std::pair<int, int>>> seg(g.num_vertices);
    for (auto& c : t.cycles) {
        int start = g.edges[c[0]].first;
        int v = start;
        int len = static_cast<int>(c.size());
        // leave start through c[0]
        int first_point = 2 * c[0] + 0;
        int cur = other_end(g, c[0], v);
        int enter = 2 * c[0] + 1;
        for (int i = 1; i < len; ++i) {
            int e = c[i];
            int side = g.edges[e].first == cur ? 0 : 1;
            int leave = 2 * e + side;
            seg[cur].insert(std::minmax(enter, leave));
            int nxt = other_end(g, e, cur);
            enter = 2 * e + (1 - side);
            cur = nxt;
        }
        if (cur != start) throw std::logic_error("fundamental cycle does not close");
        seg[start].insert(std::minmax(enter, first_point));
    }
    for (int v = 0; v < g.num_vertices; ++v) {
        std::map<int, int> parent;
        std::function<int(int)> find = [&](int x) {
            if (!parent.count(x)) parent[x] = x;
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (auto [a, b] : seg[v]) {
            if (a == b) continue;
            int ra = find(a), rb = find(b);
            if (ra == rb) return "segments at vertex " + std::to_string(v) + " close a cycle";
            parent[ra] = rb;
        }
    }
    return "";
}

int DeltaAdaptedBasis::genus() const {
    return std::accumulate(noncrossing_pairs.begin(), noncrossing_pairs.end(), 0) +
           static_cast<int>(graph_cycles.size());
}

DeltaAdaptedBasis delta_adapted_basis(const EnhancedLevelGraph& d) {
    DeltaAdaptedBasis b;
    auto g = Multigraph::of(d.base);
    std::vector<int> excluded;
    for (int e = 0; e < d.base.num_edges(); ++e)
        if (!d.is_horizontal(e) && d.kappa[e] % 2 == 0) {
            excluded.push_back(e);
            break;
        }
    b.tree = build_adapted_spanning_tree(g, std::nullopt, std::nullopt, excluded);
    b.graph_cycles = b.tree.cycles;
    b.vanishing_edges = b.tree.cotree_edges;
    b.noncrossing_pairs = d.base.genera;
    b.kappa = d.kappa;
    return b;
}

TurningAssignment turning_assignment(const DeltaAdaptedBasis& b, const std::vector<int>& vertex_parities) {
    if (vertex_parities.size() != b.noncrossing_pairs.size()) throw std::invalid_argument("one parity per vertex");
    TurningAssignment t;
    for (std::size_t v = 0; v < vertex_parities.size(); ++v) {
        int p = vertex_parities[v] & 1;
        int gv = b.noncrossing_pairs[v];
        std::vector<std::pair<int, int>> pairs;
        if (gv == 0 && p == 1) throw std::invalid_argument("a genus-0 vertex has even spin");
        for (int i = 0; i < gv; ++i) {
            if (i == 0) pairs.push_back(p ? std::pair{0, 0} : std::pair{1, 0});
            else pairs.push_back({1, 1});
        }
        t.noncrossing.push_back(pairs);
    }
    for (int q : b.vanishing_edges) {
        int kq = b.kappa[q];
        t.vanishing_ind.push_back(kq % 2);
        t.graph_cycle_base.push_back(0);
    }
    return t;
}

ProngMatching ProngMatching::zero(const EnhancedLevelGraph& d) {
    ProngMatching s;
    s.kappa = d.kappa;
    s.offsets.assign(d.kappa.size(), 0);
    return s;
}

std::uint64_t ProngMatching::group_order() const {
    std::uint64_t n = 1;
    for (int x : kappa)
        if (x > 0) n *= static_cast<std::uint64_t>(x);
    return n;
}

ProngMatching rotate_prong_matching(const ProngMatching& s, int edge, long l) {
    if (edge < 0 || edge >= static_cast<int>(s.kappa.size())) throw std::out_of_range("no such edge");
    if (s.kappa[edge] <= 0) throw std::invalid_argument("prong rotation at a horizontal edge");
    ProngMatching out = s;
    long k = s.kappa[edge];
    out.offsets[edge] = ((out.offsets[edge] + l) % k + k) % k;
    return out;
}

int arf_parity(const DeltaAdaptedBasis& b, const TurningAssignment& t, const ProngMatching& s) {
    int arf = 0;
    for (auto& pairs : t.noncrossing)
        for (auto [x, y] : pairs) arf += (x + 1) * (y + 1);
    for (std::size_t j = 0; j < b.graph_cycles.size(); ++j) {
        long ind = t.graph_cycle_base[j];
        for (int e : b.graph_cycles[j])
            if (s.kappa[e] > 0) ind += s.offsets[e];
        arf += static_cast<int>(((ind + 1) % 2) * ((t.vanishing_ind[j] + 1) % 2));
    }
    return arf & 1;
}

SpinClassification classify_spin(const EnhancedLevelGraph& d, const std::vector<int>& vertex_parities) {
    SpinClassification c;
    for (int e = 0; e < d.base.num_edges(); ++e)
        if (!d.is_horizontal(e) && d.kappa[e] % 2 == 0) {
            c.kind = SpinClassification::Kind::HalfHalf;
            return c;
        }
    if (static_cast<int>(vertex_parities.size()) != d.base.num_vertices())
        throw std::invalid_argument("one parity per vertex");
    for (int p : vertex_parities) c.parity ^= p & 1;
    return c;
}

ParityCensus prong_parity_census(const EnhancedLevelGraph& d, const std::vector<int>& vertex_parities) {
    auto b = delta_adapted_basis(d);
    auto t = turning_assignment(b, vertex_parities);
    auto s = ProngMatching::zero(d);
    std::uint64_t total = s.group_order();
    if (total > 10000000) throw std::invalid_argument("prong rotation group too large for a census");
    ParityCensus c;
    for (std::uint64_t i = 0; i < total; ++i) {
        std::uint64_t x = i;
        for (std::size_t e = 0; e < s.kappa.size(); ++e) {
            if (s.kappa[e] <= 0) continue;
            s.offsets[e] = static_cast<long>(x % s.kappa[e]);
            x /= s.kappa[e];
        }
        (arf_parity(b, t, s) ? c.odd : c.even) += 1;
    }
    return c;
}

std::vector<PairedPoleConfiguration> genus0_paired_pole_configurations(int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    std::vector<PairedPoleConfiguration> out;
    // j: the two half-cylinders meet the zero at relative angle πj/k
    for (int j = 1; j <= 2 * k - 1; ++j) {
        PairedPoleConfiguration c;
        c.sector = j;
        c.core_ind = 0;
        c.transversal_ind = j;
        c.parity = ((c.core_ind + 1) * (c.transversal_ind + 1)) % 2;
        out.push_back(c);
    }
    return out;
}

std::pair<int, int> genus0_paired_pole_census(int k) {
    int even = 0, odd = 0;
    for (auto& c : genus0_paired_pole_configurations(k)) (c.parity ? odd : even) += 1;
    return {even, odd};
}

std::optional<int> base_parity(const Signature& s) {
    if (s.g != 0 || s.k != 1 || !s.problem().empty()) return std::nullopt;
    auto o = s.orders;
    std::sort(o.begin(), o.end());
    if (o == std::vector<int>{-1, -1, 0}) return 1;
    if (s.even_type()) return 0;
    return std::nullopt;
}

int horizontal_join_spin_sign() { return -1; }

}  // namespace spinstrata
