#pragma once

#include "spinstrata/level_graph.hpp"

#include <optional>
#include <vector>

namespace spinstrata {

// Bare multigraph used for tree and cycle bookkeeping.
struct Multigraph {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    static Multigraph of(const StableGraph& g);
    std::vector<int> incident(int v) const;
};

struct AdaptedTree {
    std::vector<int> tree_edges;      // sorted edge ids
    std::vector<int> cotree_edges;    // sorted edge ids
    std::vector<std::vector<int>> cycles;  // fundamental cycle of each cotree edge, as edge ids along the cycle
    int root = 0;                     // v*
    int replacements = 0;
};

// Fundamental cycle of a non-tree edge with respect to a spanning tree, walked from one end.
std::vector<int> fundamental_cycle(const Multigraph& g, const std::vector<int>& tree_edges, int q);

// Layer-by-layer edge replacement. initial defaults to a BFS tree from vertex 0 avoiding
// excluded edges; root defaults to the lowest leaf of the initial tree.
AdaptedTree build_adapted_spanning_tree(const Multigraph& g, std::optional<std::vector<int>> initial = std::nullopt,
                                        std::optional<int> root = std::nullopt,
                                        const std::vector<int>& excluded = {});

// Segments at v drawn by the fundamental cycles, parallel copies merged. Empty string when
// every vertex gives a forest, else a description of the first offending vertex.
std::string planarity_audit(const Multigraph& g, const AdaptedTree& t);

struct DeltaAdaptedBasis {
    std::vector<std::vector<int>> graph_cycles;  // edge ids
    std::vector<int> vanishing_edges;            // seam dual to graph_cycles[i]
    std::vector<int> noncrossing_pairs;          // per vertex, its genus
    std::vector<int> kappa;                      // per edge
    AdaptedTree tree;

    int genus() const;
};

DeltaAdaptedBasis delta_adapted_basis(const EnhancedLevelGraph& d);

struct TurningAssignment {
    // per vertex, inds of its non-crossing pairs
    std::vector<std::vector<std::pair<int, int>>> noncrossing;
    std::vector<int> vanishing_ind;     // per graph cycle
    std::vector<int> graph_cycle_base;  // per graph cycle, before prong offsets
};

// Non-crossing inds realise the given vertex parities; genus-0 vertices must have parity 0.
TurningAssignment turning_assignment(const DeltaAdaptedBasis& b, const std::vector<int>& vertex_parities);

struct ProngMatching {
    std::vector<int> kappa;     // per edge, 0 for horizontal
    std::vector<long> offsets;  // per edge, in [0, kappa)

    static ProngMatching zero(const EnhancedLevelGraph& d);
    std::uint64_t group_order() const;
};

ProngMatching rotate_prong_matching(const ProngMatching& s, int edge, long l);

int arf_parity(const DeltaAdaptedBasis& b, const TurningAssignment& t, const ProngMatching& s);

struct SpinClassification {
    enum class Kind { HalfHalf, Constant };
    Kind kind = Kind::Constant;
    int parity = 0;  // meaningful for Constant
};

SpinClassification classify_spin(const EnhancedLevelGraph& d, const std::vector<int>& vertex_parities);

struct ParityCensus {
    std::uint64_t even = 0;
    std::uint64_t odd = 0;
};
// Arf parity over every element of the prong rotation group.
ParityCensus prong_parity_census(const EnhancedLevelGraph& d, const std::vector<int>& vertex_parities);

// Flat models of H_0(2k,-2k,-1,-1) with paired residues.
struct PairedPoleConfiguration {
    int sector = 0;          // j in 1..2k-1
    int core_ind = 0;
    int transversal_ind = 0;
    int parity = 0;
};
std::vector<PairedPoleConfiguration> genus0_paired_pole_configurations(int k);
std::pair<int, int> genus0_paired_pole_census(int k);  // (even, odd)

// nullopt when the signature is not a genus-0 base case
std::optional<int> base_parity(const Signature& s);

int horizontal_join_spin_sign();

}  // namespace spinstrata
