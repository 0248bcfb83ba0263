#pragma once

#include "spinstrata/algebra.hpp"
#include "spinstrata/stable_graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace spinstrata {

struct Signature {
    int g = 0;
    std::vector<int> orders;
    int k = 1;

    int n() const { return static_cast<int>(orders.size()); }
    bool even_type() const;
    // μ ∉ kℤⁿ_{≥0}
    bool meromorphic() const;
    // empty when Σ mᵢ = k(2g−2) and k ≥ 1
    std::string problem() const;
};

// Σ_l c_l · res_l = 0, indexed by marking label
using ResidueCondition = std::map<int, Rational>;
using ResidueConditions = std::vector<ResidueCondition>;

ResidueCondition residue_part(const std::vector<int>& labels);
// Non-empty when the condition is a plain part (all coefficients equal); returns its labels.
std::vector<int> as_part(const ResidueCondition& c);

struct StratumComponent {
    int genus = 0;
    std::vector<int> legs;
    std::vector<int> orders;
};

struct GeneralisedStratum {
    std::vector<StratumComponent> components;
    ResidueConditions residues;
    int k = 1;

    static GeneralisedStratum connected(int g, const std::vector<int>& orders, const ResidueConditions& res = {},
                                        int k = 1);
    static GeneralisedStratum connected(int g, const std::vector<int>& legs, const std::vector<int>& orders,
                                        const ResidueConditions& res, int k = 1);

    int num_components() const { return static_cast<int>(components.size()); }
    int genus() const;  // of the single component; throws if disconnected
    std::vector<int> legs() const;
    std::vector<int> orders_of_legs() const;  // aligned with legs()
    int order_of(int label) const;
    int component_of(int label) const;
    std::vector<int> poles() const;
    bool has_poles(int comp) const;

    // rank of the residue conditions on top of the per-component residue theorems
    int independent_conditions() const;
    int dimension() const;  // projectivized
    bool residue_forced_zero(int label) const;
    bool condition_implied(const ResidueCondition& c) const;
    bool components_linked() const;
    // Component c alone, with the conditions of the full system supported on its poles.
    GeneralisedStratum component_stratum(int c) const;
    // "" when the stratum is non-empty by the artifact's checks, else the reason
    std::string emptiness() const;
    std::string key() const;
    std::string describe() const;
};

struct EnhancedLevelGraph {
    StableGraph base;
    std::vector<int> level;    // per vertex, 0 (top) or -1
    std::vector<int> kappa;    // per edge; 0 marks a horizontal edge
    std::map<int, int> orders;  // leg label -> order
    ResidueConditions residues;  // conditions of the ambient stratum
    int k = 1;

    bool is_horizontal(int e) const { return kappa[e] == 0; }
    bool is_vertical_two_level() const;
    int node_order(int half) const;
    int upper_half(int e) const;
    int lower_half(int e) const;
    std::vector<int> vertices_at(int lvl) const;
    std::vector<int> vertical_kappas() const;
    std::uint64_t ell() const;
    Rational prod_kappa() const;
    long automorphisms() const;
    std::string key() const;
    std::vector<std::string> violations() const;
    std::string describe() const;
};

EnhancedLevelGraph canonical_level_graph(const EnhancedLevelGraph& g);

struct Enhancement {
    enum class Kind { Vertical, Horizontal, Incompatible };
    Kind kind = Kind::Incompatible;
    int kappa = 0;
};
Enhancement enhancement_from_orders(int upper_order, int lower_order, int k = 1);

std::vector<EnhancedLevelGraph> enumerate_two_level_graphs(const GeneralisedStratum& s);
std::vector<EnhancedLevelGraph> enumerate_horizontal_one_edge(const GeneralisedStratum& s);
std::vector<EnhancedLevelGraph> simple_star_graphs(const Signature& sig, bool odd_only);

Rational prong_matching_class_count(const EnhancedLevelGraph& d);
Rational prong_matching_class_count(const std::vector<int>& kappas);

struct LevelExtract {
    GeneralisedStratum stratum;
    ResidueConditions grc;
};
enum class Level { Top, Bottom };
LevelExtract extract_level_stratum(const EnhancedLevelGraph& d, Level which);
// The stratum of the single vertex of a self-node graph, or the two vertices of a compact-type one.
GeneralisedStratum horizontal_level_stratum(const EnhancedLevelGraph& d);

// Rank of the top-level conditions, optionally with one extra ambient condition added.
int top_condition_rank(const EnhancedLevelGraph& d, const ResidueCondition* extra = nullptr);

}  // namespace spinstrata
