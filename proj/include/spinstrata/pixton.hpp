#pragma once

#include "spinstrata/taut.hpp"

#include <map>
#include <string>
#include <vector>

namespace spinstrata {

struct RamificationVector {
    std::vector<int> a;
    int g = 0;
    int k = 1;

    static RamificationVector from_signature(int g, const std::vector<int>& mu, int k = 1);
    bool consistent() const;  // Σ aᵢ = k(2g−2+n)
    bool all_odd() const;
};

using Weighting = std::map<int, long>;  // half-edge or leg label -> value in [0, r)

std::vector<Weighting> admissible_weightings(const StableGraph& gamma, const RamificationVector& a, long r,
                                             bool odd_only);

// ξ_Γ*[...] of the Cont integrand (no 1/|Aut|), all parts of degree ≤ max_degree.
DecoratedClass contribution_class(const RamificationVector& a, const StableGraph& gamma, const Weighting& w,
                                  int max_degree);

// Degree-d part of P^{r} at a fixed r.
DecoratedClass pixton_P(const RamificationVector& a, long r, int degree, bool spin);

struct RPolyClass {
    int g = 0;
    std::vector<int> legs;
    std::map<std::string, std::pair<DecoratedTerm, UniPoly>> terms;
    std::vector<long> samples;
    std::vector<long> checks;
    std::vector<std::string> log;

    DecoratedClass at(const Rational& r) const;
};

// Samples r = R₀ + 2j; sample_set = 1 picks a second, disjoint run.
RPolyClass pixton_P_poly(const RamificationVector& a, int degree, bool spin, int sample_set = 0);
long pixton_base_sample(const RamificationVector& a);

DecoratedClass dr_cycle(const RamificationVector& a, std::vector<std::string>* log = nullptr);
DecoratedClass spin_dr_cycle(const RamificationVector& a, std::vector<std::string>* log = nullptr);

}  // namespace spinstrata
