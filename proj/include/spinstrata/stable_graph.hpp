#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace spinstrata {

// Every vertex lists its half-edge labels; legs are the labels not used by an edge.
// Markings keep their labels; edge halves get labels above every marking.
struct StableGraph {
    std::vector<int> genera;
    std::vector<std::vector<int>> halves;
    std::vector<std::pair<int, int>> edges;

    static StableGraph smooth(int g, std::vector<int> legs);

    int num_vertices() const { return static_cast<int>(genera.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    std::vector<int> legs() const;
    std::vector<int> legs_at(int v) const;
    int vertex_of(int label) const;
    int valence(int v) const { return static_cast<int>(halves[v].size()); }
    int h1() const { return num_edges() - num_vertices() + 1; }
    int genus() const;
    int max_label() const;
    int partner(int label) const;  // other half of an edge, -1 for a leg
    bool is_leg(int label) const { return partner(label) < 0; }
    bool connected() const;
    void normalize();  // sort label lists
};

struct GraphViolation {
    std::string what;
    int index = -1;
};

std::vector<GraphViolation> validate_stable_graph(const StableGraph& g, int genus, const std::vector<int>& legs);

// Generic canonical labelling of a vertex/edge-attributed multigraph.
struct CanonInput {
    struct Edge {
        int u;
        std::vector<long> au;
        int v;
        std::vector<long> av;
    };
    std::vector<std::vector<long>> vkey;
    std::vector<Edge> edges;
};

struct CanonResult {
    std::vector<long> encoding;
    std::vector<int> vertex_order;   // new position -> old vertex
    std::vector<int> new_index;      // old vertex -> new position
    std::vector<std::pair<int, bool>> edge_order;  // canonical edge order: (old edge, swapped)
    long automorphisms = 1;
};

CanonResult canonicalize(const CanonInput& in);
std::string encoding_string(const std::vector<long>& enc);

CanonInput canon_input(const StableGraph& g);
// Relabel edge halves canonically (legs untouched), vertices in canonical order.
StableGraph canonical_graph(const StableGraph& g, CanonResult* info = nullptr);
std::string canonical_form(const StableGraph& g);
bool isomorphic(const StableGraph& a, const StableGraph& b);
long automorphism_order(const StableGraph& g);

std::vector<StableGraph> enumerate_one_edge_graphs(int g, int n);
std::vector<StableGraph> enumerate_one_edge_graphs(int g, const std::vector<int>& legs);
std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges);
std::vector<StableGraph> enumerate_stable_graphs(int g, const std::vector<int>& legs, int max_edges);
// All graphs obtained by splitting one vertex of g with one new edge (raw, not deduplicated).
struct Degeneration {
    StableGraph graph;
    int vertex;          // vertex of the source graph that was split
    int new_edge;        // index of the new edge in graph.edges
    std::vector<int> origin;  // new vertex -> source vertex
    long aut;            // automorphisms of the one-edge graph inserted at the vertex
};
std::vector<Degeneration> vertex_degenerations(const StableGraph& g, int v);

struct GraphContraction {
    std::vector<int> vertex_map;        // Δ vertex -> Γ vertex
    std::map<int, int> half_map;        // Γ label -> Δ label
    std::vector<int> edge_map;          // Γ edge -> Δ edge
};

std::vector<GraphContraction> enumerate_gamma_structures(const StableGraph& delta, const StableGraph& gamma);

// Contract every edge not listed in keep.
StableGraph contract_edges(const StableGraph& g, const std::vector<int>& keep);

// Vertex subgraph of Δ sent to Γ-vertex w by a contraction; legs are relabelled to Γ's labels.
struct SubgraphPiece {
    StableGraph graph;
    std::vector<int> vertices;   // Δ vertices in piece order
    std::map<int, int> label_map;  // Δ label -> piece label
};
SubgraphPiece contraction_piece(const StableGraph& delta, const StableGraph& gamma, const GraphContraction& f, int w);

std::string describe(const StableGraph& g);

}  // namespace spinstrata
