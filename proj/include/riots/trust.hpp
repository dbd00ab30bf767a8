#pragma once

#include <set>
#include <string>
#include <vector>

#include "riots/graph.hpp"

namespace riots {

using FunctionSet = std::set<std::string>;

// Trust as specified-vs-actual agreement: |S ∩ A| / |S ∪ A|.
// Both sets empty is undefined and raises EmptyUniverse.
double jaccard_trust(const FunctionSet& specified, const FunctionSet& actual);

// Discounts a direct risk by trust t ∈ [0,1]: full trust keeps the risk
// unchanged, zero trust raises it to certainty. Computed as
// r + (1 - r) * (1 - t), which is exact at t = 1 and never below r.
double apply_trust(double direct_risk, double trust);

// Effective probability for every basic event of a flat graph, in
// canonical event order. Component events whose supplier carries a trust
// value are discounted with apply_trust; all other events pass through.
std::vector<double> effective_risk_assignment(const SystemGraph& graph);

}  // namespace riots
