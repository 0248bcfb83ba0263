#pragma once

#include "spinstrata/recursion.hpp"
#include "spinstrata/spin.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace spinstrata {

using json = nlohmann::ordered_json;

json to_json(const Rational& q);
Rational rational_from_json(const json& j);

// {"vertices":[g...],"legs":[[...]],"edges":[[[v,h],[v,h]],...],"canonical":"..."}
json to_json(const StableGraph& g);
StableGraph graph_from_json(const json& j);

// components are vertices (level graphs) or stratum components
json residues_json(const ResidueConditions& rs, const std::vector<std::vector<int>>& legs_by_component);
json to_json(const EnhancedLevelGraph& d);
json to_json(const GeneralisedStratum& s);

json to_json(const DecoratedClass& c);
DecoratedClass class_from_json(const json& j);
json to_json(const ProductClass& pc);

json to_json(const RecursionTrace& t);
json to_json(const PullbackResult& p);
json to_json(const ResidueExpansion& e);

// probe name -> ∫ c·probe over the complementary-degree chains
json fingerprint_json(const DecoratedClass& c, int degree);

std::vector<int> parse_int_list(const std::string& s);
// "3:0" is r3 = 0, "2+3:0" is r2 + r3 = 0, "2*3-4:0" weights r3 by 2 and r4 by -1
ResidueCondition parse_residue(const std::string& s);

}  // namespace spinstrata
