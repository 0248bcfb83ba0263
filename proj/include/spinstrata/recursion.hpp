#pragma once

#include "spinstrata/level_graph.hpp"
#include "spinstrata/taut.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spinstrata {

enum class ClassKind { Spin, Plain };
std::string kind_name(ClassKind k);

// d(g,n), in cohomological degree
int injectivity_range(int g, int n);

struct ResidueAnalysis {
    std::vector<std::pair<int, int>> pairs;  // simple poles tied by r_a + r_b = 0
    std::vector<int> unpaired;               // simple poles left over
    ResidueConditions extra;                 // independent conditions beyond the pairs
    bool admits_spin = false;                // even type up to the pairs
};
ResidueAnalysis analyse_residues(const GeneralisedStratum& s);

// Chow degree of p_*[stratum] in M̄_{g,n} (connected strata)
int target_degree(const GeneralisedStratum& s);

struct ExpansionTerm {
    enum class Kind { Psi, Divisor };
    Kind kind = Kind::Psi;
    Rational coeff;
    int leg = 0;                 // Psi: coeff · ψ_leg · [ambient]
    EnhancedLevelGraph graph;    // Divisor: coeff · [D_graph]
};

struct ResidueExpansion {
    GeneralisedStratum ambient;
    ResidueCondition removed;
    int reference_leg = 0;       // 0 when no ξ expansion is used
    std::vector<ExpansionTerm> terms;
    int dropped_even = 0;        // graphs with an even κ, zero after spin pushforward
    std::string rule;
};

// Removable conditions are the extras, followed (plain only) by the pair conditions.
// [with R] = −ξ − Σ_{LG₁^R} ℓ[D],  ξ = (m+1)ψ_ref − Σ_{ref on bottom} ℓ[D], expressed on the ambient.
ResidueExpansion resolve_residue(const GeneralisedStratum& s, ClassKind kind,
                                 std::optional<std::size_t> which = std::nullopt,
                                 std::optional<int> reference_leg = std::nullopt);
ResidueExpansion resolve_residue_spin(const GeneralisedStratum& s, std::optional<std::size_t> which = std::nullopt,
                                      std::optional<int> reference_leg = std::nullopt);
// Spin: −Σ_{LG₁^R} ℓ[D]; plain adds +Σ_{LG₁^⊤} ℓ[D]. Removes the first pair.
ResidueExpansion resolve_paired_simple_poles(const GeneralisedStratum& s, ClassKind kind);

// Literal genus-0 bases; nullopt when the stratum is not one of them.
std::optional<DecoratedClass> spin_base_class(const GeneralisedStratum& s);

struct TraceNode {
    std::string request;
    std::string kind;
    std::string rule;
    std::string detail;
    std::vector<int> children;
    bool symbolic = false;
};

struct RecursionTrace {
    std::vector<TraceNode> nodes;
    int root = -1;
};

struct StratumClass {
    DecoratedClass cls;          // on M̄_{g,legs}; empty for zero or symbolic multi-component results
    bool symbolic = false;
    std::string note;
    int node = -1;

    bool zero() const { return !symbolic && cls.is_zero(); }
};

struct PullbackTerm {
    std::string source;          // "horizontal" or "level graph"
    EnhancedLevelGraph graph;
    int structures = 0;
    Rational coeff_per_structure;  // before the level classes
    ProductClass contribution;
    std::string note;
};

struct PullbackResult {
    StableGraph gamma;
    ProductClass total;
    std::vector<PullbackTerm> terms;
    int even_vanishing = 0;
    bool symbolic = false;
};

struct Reconstruction {
    DecoratedClass cls;
    bool symbolic = false;
    int degree = 0;
    std::vector<Chain> basis;
    std::vector<Rational> coordinates;
    std::vector<PullbackResult> pullbacks;
    std::size_t equations = 0;
    bool verified = false;
    std::string diagnostics;
};

// Memoised recursion; one engine per thread.
class SpinEngine {
public:
    StratumClass stratum_class(const GeneralisedStratum& s, ClassKind kind);
    StratumClass divisor_pushforward(const EnhancedLevelGraph& d, ClassKind kind);
    StratumClass evaluate_expansion(const ResidueExpansion& e, ClassKind kind);
    PullbackResult clutching_pullback(const GeneralisedStratum& s, const StableGraph& gamma, ClassKind kind);
    Reconstruction reconstruct(const GeneralisedStratum& s, ClassKind kind);
    // One-edge graphs used by the clutching system of s (Γ₀ only when n ≤ 2 or g = 0).
    std::vector<StableGraph> pullback_graphs(const GeneralisedStratum& s) const;

    const RecursionTrace& trace() const { return trace_; }
    void set_root(int node) { trace_.root = node; }

private:
    int open(const std::string& request, ClassKind kind, const std::string& rule);
    void close(int node);
    void attach(int child);
    struct LevelFactors {
        std::vector<DecoratedClass> per_vertex;
        bool zero = false;
        bool symbolic = false;
        std::string note;
    };
    LevelFactors level_factors(const EnhancedLevelGraph& d, ClassKind kind);
    std::vector<DecoratedClass> gamma_factors(const StableGraph& delta, const StableGraph& gamma,
                                              const GraphContraction& f, const std::vector<DecoratedClass>& per_vertex);
    StratumClass compute(const GeneralisedStratum& s, ClassKind kind, int node);

    RecursionTrace trace_;
    std::vector<int> stack_;
    std::map<std::string, StratumClass> memo_;
    std::map<std::string, Reconstruction> recon_memo_;
};

struct SpinClassResult {
    StratumClass result;
    RecursionTrace trace;
};

SpinClassResult reconstruct_spin_class(const GeneralisedStratum& s, ClassKind kind = ClassKind::Spin);
PullbackResult clutching_pullback_spin(const GeneralisedStratum& s, const StableGraph& gamma,
                                       ClassKind kind = ClassKind::Spin);
StratumClass divisor_spin_pushforward(const EnhancedLevelGraph& d, ClassKind kind = ClassKind::Spin);
DecoratedClass stratum_class_g0(const GeneralisedStratum& s);

// Candidate directions of degree d on M̄_{g,legs} left undetermined by the one-edge pullbacks.
int clutching_kernel_dimension(int g, const std::vector<int>& legs, int degree, bool include_self_node);
// Degree-d chains with independent fingerprints against the complementary degree.
std::vector<Chain> candidate_basis(int g, const std::vector<int>& legs, int degree);

// [H_1(2m)]^spin = [H_1(2m)] − 2[H_1(m)], from plain classes.
StratumClass genus_one_identity(const Signature& mu);

struct ConjectureSide {
    DecoratedClass cls;
    bool symbolic = false;
    std::vector<std::string> notes;
    int star_graphs = 0;
};
ConjectureSide conjecture_rhs(const Signature& mu);

}  // namespace spinstrata
