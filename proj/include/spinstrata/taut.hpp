#pragma once

#include "spinstrata/algebra.hpp"
#include "spinstrata/stable_graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace spinstrata {

// ξ_{Γ*} of a ψ/κ monomial on M̄_Γ, without the 1/|Aut Γ| factor.
struct DecoratedTerm {
    StableGraph graph;
    std::map<int, int> psi;                 // label -> exponent
    std::vector<std::vector<int>> kappa;    // per vertex, sorted κ indices (a multiset = monomial)

    int degree() const;
    int psi_at(int label) const;
};

struct CanonicalTerm {
    std::string key;
    DecoratedTerm term;
    long automorphisms = 1;
};
CanonicalTerm canonical_term(const DecoratedTerm& t);

class DecoratedClass {
public:
    struct Entry {
        Rational coeff;
        DecoratedTerm term;
    };

    DecoratedClass() = default;
    DecoratedClass(int g, std::vector<int> legs);
    static DecoratedClass fundamental(int g, std::vector<int> legs);
    static DecoratedClass from_term(int g, std::vector<int> legs, const DecoratedTerm& t, const Rational& c = 1);

    int g() const { return g_; }
    const std::vector<int>& legs() const { return legs_; }
    int n() const { return static_cast<int>(legs_.size()); }
    int dim() const { return 3 * g_ - 3 + n(); }
    const std::map<std::string, Entry>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // -1 when empty, -2 when inhomogeneous
    int degree() const;
    DecoratedClass degree_part(int d) const;

    void add(const Rational& c, const DecoratedTerm& t);
    DecoratedClass& operator+=(const DecoratedClass& o);
    DecoratedClass& operator-=(const DecoratedClass& o);
    DecoratedClass& operator*=(const Rational& s);
    friend DecoratedClass operator+(DecoratedClass a, const DecoratedClass& b) { return a += b; }
    friend DecoratedClass operator-(DecoratedClass a, const DecoratedClass& b) { return a -= b; }
    friend DecoratedClass operator*(const Rational& s, DecoratedClass a) { return a *= s; }

    // Rename legs (old label -> new label); internal halves are renumbered.
    DecoratedClass relabel(const std::map<int, int>& leg_map) const;

private:
    int g_ = 0;
    std::vector<int> legs_;
    std::map<std::string, Entry> terms_;
};

DecoratedClass mul_psi(const DecoratedClass& c, int leg, int exponent = 1);
DecoratedClass mul_kappa(const DecoratedClass& c, int a);
struct PsiKappaMonomial {
    std::map<int, int> psi;
    std::vector<int> kappa;
};
DecoratedClass mul_psi_kappa(const DecoratedClass& c, const PsiKappaMonomial& m);
DecoratedClass mul_boundary_divisor(const DecoratedClass& c, const StableGraph& gamma_prime);

// Graft one term per Γ-vertex (legs labelled by Γ's halves) into an ambient term.
DecoratedTerm graft(const StableGraph& gamma, const std::vector<DecoratedTerm>& pieces);
DecoratedClass clutch_pushforward(const std::vector<DecoratedClass>& factors, const StableGraph& gamma);

Rational correlator(int g, std::vector<int> psi_exps, std::vector<int> kappa_exps = {});
Rational integrate_term(const DecoratedTerm& t);
Rational integrate_class(const DecoratedClass& c, bool* degree_mismatch = nullptr);

// ---- chains of generators: probes and candidate classes

struct Generator {
    enum class Kind { Psi, Kappa, Delta };
    Kind kind = Kind::Psi;
    int index = 0;          // leg for ψ, a for κ_a
    StableGraph divisor;    // one-edge graph for δ
    int degree() const { return kind == Kind::Kappa ? index : 1; }
    std::string name() const;
};
using Chain = std::vector<Generator>;

std::vector<Generator> generators(int g, const std::vector<int>& legs, int max_kappa);
std::vector<Chain> chains_of_degree(int g, const std::vector<int>& legs, int d, int max_delta = 2);
DecoratedClass apply_chain(const DecoratedClass& c, const Chain& ch);
std::string chain_name(const Chain& ch);

// Σ coeff · ⊗_w class_w on M̄_Γ = Π_w M̄_{g(w),n(w)}
struct ProductClass {
    StableGraph gamma;
    struct Entry {
        Rational coeff;
        std::vector<DecoratedClass> factors;
    };
    std::vector<Entry> entries;
    std::vector<std::string> notes;  // symbolic pieces, if any
    bool symbolic = false;
};

using ProductProbe = std::vector<Chain>;  // one chain per Γ-vertex
std::vector<ProductProbe> product_probes(const StableGraph& gamma, int degree, int max_delta = 2);
Rational pair_product(const ProductClass& pc, const ProductProbe& p);
DecoratedClass pushforward_probe(const StableGraph& gamma, const ProductProbe& p);
// ∫_{M̄_{g,n}} x · ξ_{Γ*}(⊗ p_w)  =  ∫_{M̄_Γ} ξ_Γ^* x · ⊗ p_w, with pushed = pushforward_probe(Γ, p)
Rational pair_pullback(const Chain& x, const DecoratedClass& pushed);

struct SpanResult {
    enum class Status { Unique, NonUnique, Inconsistent };
    Status status = Status::Inconsistent;
    std::vector<Rational> coefficients;
    std::vector<std::vector<Rational>> kernel;
};
std::vector<Rational> fingerprint(const DecoratedClass& c, const std::vector<Chain>& probes);
SpanResult express_in_span(const DecoratedClass& target, const std::vector<DecoratedClass>& candidates,
                           const std::vector<Chain>& probes);

}  // namespace spinstrata
